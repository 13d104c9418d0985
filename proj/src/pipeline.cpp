#include "fbpt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace fbpt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

void map_to_original(RrrSetCollection& rrr, std::span<const vertex_id> new_to_old) {
  for (auto& s : rrr.sets) {
    s.origin = new_to_old[s.origin];
    for (auto& v : s.members) v = new_to_old[v];
    std::sort(s.members.begin(), s.members.end());
  }
}

ImmRun run_imm_with_sets(const CsrGraph& forward, const ImmOptions& opt) {
  const auto t_start = Clock::now();
  if (opt.workers < 1) throw std::invalid_argument("workers must be >= 1");
  ImmRun run;
  auto& res = run.result;
  res.options = opt;
  res.num_vertices = forward.num_vertices();
  res.num_edges = forward.num_edges();

  auto t0 = Clock::now();
  const WeightModel model = parse_weight_model(opt.prob_model, opt.seed);
  res.prob_model = describe(model);
  CsrGraph weighted = assign_weights(forward, model);
  res.timings.weights = seconds_since(t0);

  t0 = Clock::now();
  const Ordering ordering = make_ordering(opt.order, weighted, opt.seed);
  const bool relabel = ordering.name != "none";
  std::vector<vertex_id> old_to_new;
  if (relabel) {
    auto permuted = apply_permutation(weighted, ordering.perm);
    weighted = std::move(permuted.graph);
    old_to_new = std::move(permuted.old_to_new);
  }
  res.timings.reorder = seconds_since(t0);

  t0 = Clock::now();
  const CsrGraph gT = transpose(weighted);
  res.timings.transpose = seconds_since(t0);

  // Sources are drawn in original ids so unsorted runs are reorder-invariant.
  t0 = Clock::now();
  std::vector<vertex_id> sources = make_sources(forward.num_vertices(), opt.theta, opt.seed, SourcePolicy::random);
  if (relabel) {
    for (auto& s : sources) s = old_to_new[s];
  }
  if (opt.sorted_sources) std::sort(sources.begin(), sources.end());

  SamplingPlan plan;
  plan.theta = opt.theta;
  plan.colors_per_group = opt.colors;
  plan.base_seed = opt.seed;
  plan.source_policy = opt.sorted_sources ? SourcePolicy::sorted : SourcePolicy::random;
  plan.worker_pools = {WorkerPool{opt.workers, opt.colors, 1, 1.0}};
  auto sampled = run_sampling(gT, plan, sources);
  res.timings.sampling = seconds_since(t0);
  res.metrics = std::move(sampled.metrics);
  run.rrr = std::move(sampled.rrr);
  if (relabel) map_to_original(run.rrr, ordering.perm);

  t0 = Clock::now();
  res.selection = greedy_max_cover(run.rrr, opt.k);
  res.timings.selection = seconds_since(t0);
  res.rrr_hash = run.rrr.canonical_hash();
  res.rrr_total_members = run.rrr.total_members();
  res.timings.total = seconds_since(t_start);
  return run;
}

ImmResult run_imm(const CsrGraph& forward, const ImmOptions& options) {
  return run_imm_with_sets(forward, options).result;
}

std::string to_json(const ImmResult& r, bool with_timings) {
  nlohmann::ordered_json j;
  j["seeds"] = r.selection.seeds;
  j["sigma_hat"] = r.selection.sigma_hat;
  j["covered"] = r.selection.covered;
  j["zero_gain_from"] = r.selection.first_zero_gain;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << r.rrr_hash;
  j["rrr_hash"] = hash.str();
  j["meta"] = {
      {"vertices", r.num_vertices},
      {"edges", r.num_edges},
      {"theta", r.options.theta},
      {"colors", r.options.colors},
      {"k", r.options.k},
      {"seed", r.options.seed},
      {"order", r.options.order},
      {"sorted_sources", r.options.sorted_sources},
      {"prob_model", r.prob_model},
  };
  j["metrics"] = {
      {"edge_evaluations", r.metrics.edge_evaluations},
      {"edge_bit_evaluations", r.metrics.edge_bit_evaluations},
      {"vertex_pops", r.metrics.vertex_pops},
      {"levels", r.metrics.levels},
      {"avg_occupancy", r.metrics.average_occupancy()},
      {"rrr_total_members", r.rrr_total_members},
  };
  if (with_timings) {
    j["meta"]["workers"] = r.options.workers;
    j["timings"] = {
        {"weights_s", r.timings.weights},     {"reorder_s", r.timings.reorder},
        {"transpose_s", r.timings.transpose}, {"sampling_s", r.timings.sampling},
        {"selection_s", r.timings.selection}, {"total_s", r.timings.total},
    };
  }
  return j.dump(2);
}

CoupledStudy coupled_study(const CsrGraph& gT, std::span<const vertex_id> sources, std::size_t colors,
                           std::uint64_t seed, std::size_t workers) {
  if (colors == 0) throw std::invalid_argument("colors must be >= 1");
  if (sources.empty()) throw std::invalid_argument("coupled study needs at least one source");
  const auto t0 = Clock::now();
  const std::uint64_t groups = (sources.size() + colors - 1) / colors;
  CoupledStudy study;
  study.groups.resize(groups);
  WorkCounter counter(groups);
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    TraversalState state;
    try {
      for (auto c = counter.claim(1); !c.empty(); c = counter.claim(1)) {
        const std::uint64_t g = c.begin;
        GroupSpec spec{g, std::vector<vertex_id>(colors, kInactiveSource)};
        for (std::size_t i = 0; i < colors && g * colors + i < sources.size(); ++i) {
          spec.sources[i] = sources[g * colors + i];
        }
        auto& out = study.groups[g];
        out.group_id = g;
        out.fused = state.run(gT, spec.sources, GroupCoinPolicy(seed, g));
        const auto fused_sets = state.members_by_color();
        for (std::size_t i = 0; i < colors; ++i) {
          if (spec.sources[i] == kInactiveSource) continue;
          auto single = unfused_traverse(gT, spec.sources[i], g, static_cast<std::uint32_t>(i), seed);
          out.unfused += single.metrics;
          out.sets_match = out.sets_match && single.visited == fused_sets[i];
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (const auto& g : study.groups) {
    study.fused += g.fused;
    study.unfused += g.unfused;
    study.all_match = study.all_match && g.sets_match;
  }
  study.wall_seconds = seconds_since(t0);
  return study;
}

}  // namespace fbpt
