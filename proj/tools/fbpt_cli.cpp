#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbpt/engine.hpp"
#include "fbpt/graph.hpp"
#include "fbpt/metrics.hpp"
#include "fbpt/pipeline.hpp"
#include "fbpt/plot.hpp"
#include "fbpt/reorder.hpp"
#include "fbpt/synth.hpp"

using namespace fbpt;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit_error(const std::string& kind, const std::string& message) {
  json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

std::size_t env_workers(std::size_t fallback) {
  const char* env = std::getenv("FBPT_THREADS");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used != std::string(env).size() || v == 0) throw std::invalid_argument("bad");
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw UsageError("FBPT_THREADS must be a positive integer, got '" + std::string(env) + "'");
  }
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

// ---- info ----

json graph_info(const CsrGraph& g) {
  const auto indeg = in_degrees(g);
  std::size_t max_out = 0, max_in = 0, sources = 0, sinks = 0;
  for (vertex_id v = 0; v < g.num_vertices(); ++v) {
    max_out = std::max(max_out, g.out_degree(v));
    max_in = std::max(max_in, indeg[v]);
    sinks += g.out_degree(v) == 0;
    sources += indeg[v] == 0;
  }
  const double n = static_cast<double>(g.num_vertices());
  return {
      {"vertices", g.num_vertices()},
      {"edges", g.num_edges()},
      {"avg_out_degree", n > 0 ? static_cast<double>(g.num_edges()) / n : 0.0},
      {"max_out_degree", max_out},
      {"max_in_degree", max_in},
      {"zero_out_degree", sinks},
      {"zero_in_degree", sources},
  };
}

// ---- bench ----

struct BenchOptions {
  std::string graph;
  std::size_t synth_n = 10000;
  double synth_avg = 16.0;
  double synth_exponent = 2.5;
  std::vector<double> ps{0.01, 0.1, 0.5};
  std::vector<std::size_t> colors{64};
  std::vector<std::string> orders{"none"};
  std::vector<std::size_t> workers{1};
  std::uint64_t theta = 4096;
  std::uint64_t seed = 1;
  std::string prob_model = "uniform";
  std::string out;
  std::string svg;
};

struct LoadedGraph {
  CsrGraph graph;
  std::string name;
};

LoadedGraph bench_graph(const BenchOptions& o) {
  if (!o.graph.empty()) {
    const auto slash = o.graph.find_last_of('/');
    return {load_graph(o.graph), slash == std::string::npos ? o.graph : o.graph.substr(slash + 1)};
  }
  std::ostringstream name;
  name << "powerlaw-n" << o.synth_n << "-d" << o.synth_avg << "-s" << o.seed;
  return {powerlaw_graph(o.synth_n, o.synth_avg, o.synth_exponent, o.seed).graph, name.str()};
}

// Forward graph with weights, reordered; returns its transpose.
CsrGraph prepare(const CsrGraph& forward, const WeightModel& model, const std::string& order, std::uint64_t seed,
                 std::vector<vertex_id>& old_to_new) {
  CsrGraph weighted = assign_weights(forward, model);
  const Ordering ordering = make_ordering(order, weighted, seed);
  if (ordering.name != "none") {
    auto permuted = apply_permutation(weighted, ordering.perm);
    old_to_new = std::move(permuted.old_to_new);
    return transpose(permuted.graph);
  }
  old_to_new.clear();
  return transpose(weighted);
}

std::vector<vertex_id> bench_sources(std::size_t n, std::uint64_t theta, std::uint64_t seed,
                                     const std::vector<vertex_id>& old_to_new) {
  auto sources = make_sources(n, theta, seed, SourcePolicy::random);
  if (!old_to_new.empty()) {
    for (auto& s : sources) s = old_to_new[s];
  }
  return sources;
}

std::vector<BenchRow> bench_coupled(const BenchOptions& o, bool with_unfused) {
  const auto loaded = bench_graph(o);
  std::vector<BenchRow> rows;
  for (const auto& order : o.orders) {
    for (double p : o.ps) {
      std::vector<vertex_id> old_to_new;
      const CsrGraph gT = prepare(loaded.graph, ConstantWeight{p}, order, o.seed, old_to_new);
      const auto sources = bench_sources(loaded.graph.num_vertices(), o.theta, o.seed, old_to_new);
      for (std::size_t C : o.colors) {
        for (std::size_t w : o.workers) {
          BenchRow row;
          row.graph = loaded.name;
          row.p = p;
          row.colors = C;
          row.order = order;
          row.workers = w;
          if (with_unfused) {
            const auto study = coupled_study(gT, sources, C, o.seed, w);
            if (!study.all_match) throw std::runtime_error("fused and unfused visited sets disagree");
            row.fused_edges = study.fused.edge_evaluations;
            row.unfused_edges = study.unfused.edge_evaluations;
            const auto s = work_savings(study.fused, study.unfused);
            row.savings = s.value;
            row.avg_occupancy = study.fused.average_occupancy();
            row.wall_ms = study.wall_seconds * 1e3;
          } else {
            SamplingPlan plan;
            plan.theta = o.theta;
            plan.colors_per_group = C;
            plan.base_seed = o.seed;
            plan.worker_pools = {WorkerPool{w, C, 1, 1.0}};
            const auto result = run_sampling(gT, plan, sources);
            row.fused_edges = result.metrics.edge_evaluations;
            row.has_unfused = false;
            row.avg_occupancy = result.metrics.average_occupancy();
            row.wall_ms = result.wall_seconds * 1e3;
          }
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::vector<BenchRow> bench_scaling(const BenchOptions& o) {
  const auto loaded = bench_graph(o);
  const WeightModel model = parse_weight_model(o.prob_model, o.seed);
  std::vector<BenchRow> rows;
  for (const auto& order : o.orders) {
    std::vector<vertex_id> old_to_new;
    const CsrGraph gT = prepare(loaded.graph, model, order, o.seed, old_to_new);
    const auto sources = bench_sources(loaded.graph.num_vertices(), o.theta, o.seed, old_to_new);
    for (std::size_t C : o.colors) {
      for (std::size_t w : o.workers) {
        SamplingPlan plan;
        plan.theta = o.theta;
        plan.colors_per_group = C;
        plan.base_seed = o.seed;
        plan.worker_pools = {WorkerPool{w, C, 1, 1.0}};
        const auto result = run_sampling(gT, plan, sources);
        BenchRow row;
        row.graph = loaded.name;
        row.p = std::holds_alternative<ConstantWeight>(model) ? std::get<ConstantWeight>(model).p : -1.0;
        row.colors = C;
        row.fused_edges = result.metrics.edge_evaluations;
        row.has_unfused = false;
        row.avg_occupancy = result.metrics.average_occupancy();
        row.wall_ms = result.wall_seconds * 1e3;
        row.order = order;
        row.workers = w;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string bench_svg(const std::string& kind, const std::vector<BenchRow>& rows) {
  PlotSpec spec;
  std::map<std::string, Series> by_series;
  for (const auto& r : rows) {
    std::ostringstream label;
    double x = 0.0, y = 0.0;
    if (kind == "scaling") {
      label << "C=" << r.colors << " " << r.order;
      x = static_cast<double>(r.workers);
      y = r.wall_ms;
    } else {
      label << "C=" << r.colors << " " << r.order << " w=" << r.workers;
      x = r.p;
      y = kind == "savings" ? (r.has_unfused ? r.savings : std::nan("")) : r.avg_occupancy;
    }
    auto& s = by_series[label.str()];
    s.label = label.str();
    s.x.push_back(x);
    s.y.push_back(y);
  }
  if (kind == "scaling") {
    spec.title = "Sampling wall time vs workers";
    spec.x_label = "workers";
    spec.y_label = "wall time (ms)";
  } else {
    spec.title = kind == "savings" ? "Work savings vs edge probability" : "Color occupancy vs edge probability";
    spec.x_label = "p";
    spec.y_label = kind == "savings" ? "savings" : "average occupancy";
    spec.log_x = true;
  }
  std::vector<Series> series;
  for (auto& [_, s] : by_series) series.push_back(std::move(s));
  return render_svg(spec, series);
}

void add_bench_options(CLI::App* cmd, BenchOptions& o) {
  cmd->add_option("--graph", o.graph, "Edge list or binary cache (default: synthetic power-law graph)");
  cmd->add_option("--synth-n", o.synth_n, "Synthetic graph vertices")->check(CLI::Range(2, 1 << 30));
  cmd->add_option("--synth-avg", o.synth_avg, "Synthetic graph average out-degree");
  cmd->add_option("--synth-exponent", o.synth_exponent, "Synthetic graph power-law exponent");
  cmd->add_option("--p", o.ps, "Constant edge probabilities to sweep")->delimiter(',');
  cmd->add_option("--colors", o.colors, "Colors per group to sweep")->delimiter(',');
  cmd->add_option("--order", o.orders, "Vertex orderings to sweep")->delimiter(',');
  cmd->add_option("--workers", o.workers, "Worker counts to sweep")->delimiter(',');
  cmd->add_option("--theta", o.theta, "Traversals per cell");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--out", o.out, "CSV output path (default stdout)");
  cmd->add_option("--svg", o.svg, "Also render an SVG line plot to this path");
}

int run(int argc, char** argv) {
  CLI::App app{"Fused probabilistic traversal sampler for influence maximization"};
  app.require_subcommand(1);

  std::string info_path;
  auto* info = app.add_subcommand("info", "Print vertex/edge counts and degree statistics");
  info->add_option("graph", info_path, "Edge list or binary cache")->required();

  std::size_t gen_n = 10000;
  double gen_avg = 16.0, gen_exp = 2.5;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic power-law edge list");
  gen->add_option("--n", gen_n, "Vertices");
  gen->add_option("--avg", gen_avg, "Target average out-degree");
  gen->add_option("--exponent", gen_exp, "Power-law exponent in [2, 3.5]");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Edge-list output path")->required();

  std::string conv_in, conv_out;
  auto* convert = app.add_subcommand("convert", "Convert an edge list to the binary cache format");
  convert->add_option("input", conv_in, "Edge list")->required();
  convert->add_option("output", conv_out, "Binary cache path")->required();

  std::string ord_graph, ord_method = "rcm", ord_out;
  std::uint64_t ord_seed = 1;
  auto* order = app.add_subcommand("order", "Compute a vertex ordering and write it as a permutation file");
  order->add_option("graph", ord_graph, "Edge list or binary cache")->required();
  order->add_option("--method", ord_method, "random, degree, rcm or cluster");
  order->add_option("--seed", ord_seed, "Seed for random and cluster orders");
  order->add_option("--out", ord_out, "Permutation output path")->required();

  std::string imm_graph;
  ImmOptions imm_opt;
  bool imm_no_timings = false;
  auto* imm = app.add_subcommand("imm", "Sample RRR sets with fused traversals and select seeds");
  imm->add_option("graph", imm_graph, "Edge list or binary cache")->required();
  imm->add_option("--theta", imm_opt.theta, "Number of RRR sets");
  imm->add_option("--colors", imm_opt.colors, "Traversals fused per group")->check(CLI::PositiveNumber);
  imm->add_option("--k", imm_opt.k, "Seed set size");
  imm->add_option("--seed", imm_opt.seed, "Base seed");
  imm->add_option("--order", imm_opt.order, "none, random, degree, rcm or cluster");
  imm->add_flag("--sorted-sources", imm_opt.sorted_sources, "Sort sources by vertex id before grouping");
  imm->add_option("--workers", imm_opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  imm->add_option("--prob-model", imm_opt.prob_model, "uniform[:seed], constant:<p> or wc");
  imm->add_flag("--no-timings", imm_no_timings, "Omit wall-clock fields");

  auto* bench = app.add_subcommand("bench", "CSV sweeps over probability, colors, ordering and workers");
  bench->require_subcommand(1);
  BenchOptions occ_opt, sav_opt, scal_opt;
  scal_opt.ps = {};
  scal_opt.theta = 8192;
  scal_opt.workers = {1, 2, 4, 8};
  auto* b_occ = bench->add_subcommand("occupancy", "Average color occupancy per configuration");
  add_bench_options(b_occ, occ_opt);
  auto* b_sav = bench->add_subcommand("savings", "Fused vs unfused edge evaluations per configuration");
  add_bench_options(b_sav, sav_opt);
  auto* b_scal = bench->add_subcommand("scaling", "Sampling wall time per worker count");
  add_bench_options(b_scal, scal_opt);
  b_scal->add_option("--prob-model", scal_opt.prob_model, "uniform[:seed], constant:<p> or wc");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return 2;
  }

  if (*info) {
    std::cout << graph_info(load_graph(info_path)).dump(2) << '\n';
  } else if (*gen) {
    const auto synth = powerlaw_graph(gen_n, gen_avg, gen_exp, gen_seed);
    auto out = open_out(gen_out);
    write_edge_list(synth.graph, out);
    const auto& r = synth.report;
    json j{{"vertices", r.num_vertices},        {"edges", r.num_edges},
           {"target_avg_out_degree", r.target_avg_outdeg}, {"avg_out_degree", r.realized_avg_outdeg},
           {"exponent", r.exponent},             {"max_out_degree", r.max_out_degree},
           {"seed", r.seed},                     {"path", gen_out}};
    std::cout << j.dump(2) << '\n';
  } else if (*convert) {
    const CsrGraph g = load_graph(conv_in);
    auto out = open_out(conv_out, std::ios::out | std::ios::binary);
    write_binary(g, out);
    std::cout << json{{"vertices", g.num_vertices()}, {"edges", g.num_edges()}, {"path", conv_out}}.dump(2) << '\n';
  } else if (*order) {
    const CsrGraph g = load_graph(ord_graph);
    const Ordering o = make_ordering(ord_method, g, ord_seed);
    const auto permuted = apply_permutation(g, o.perm);
    auto out = open_out(ord_out);
    write_ordering(out, o.perm);
    std::cout << json{{"method", o.name},
                      {"vertices", g.num_vertices()},
                      {"bandwidth_before", bandwidth(g)},
                      {"bandwidth_after", bandwidth(permuted.graph)},
                      {"path", ord_out}}
                     .dump(2)
              << '\n';
  } else if (*imm) {
    imm_opt.workers = env_workers(imm_opt.workers);
    const auto result = run_imm(load_graph(imm_graph), imm_opt);
    std::cout << to_json(result, !imm_no_timings) << '\n';
  } else if (*bench) {
    const bool is_scal = b_scal->parsed();
    auto& o = b_occ->parsed() ? occ_opt : b_sav->parsed() ? sav_opt : scal_opt;
    const std::string kind = b_occ->parsed() ? "occupancy" : b_sav->parsed() ? "savings" : "scaling";
    if (std::getenv("FBPT_THREADS") != nullptr) o.workers = {env_workers(1)};
    if (o.ps.empty() && !is_scal) throw UsageError("--p needs at least one value");
    const auto rows = is_scal ? bench_scaling(o) : bench_coupled(o, kind == "savings");
    std::ostringstream csv;
    write_csv_header(csv);
    for (const auto& r : rows) write_csv_row(csv, r);
    if (o.out.empty()) {
      std::cout << csv.str();
    } else {
      open_out(o.out) << csv.str();
    }
    if (!o.svg.empty()) {
      std::istringstream back(csv.str());
      open_out(o.svg) << bench_svg(kind, read_csv(back));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    emit_error("usage", e.what());
    return 2;
  } catch (const ParseError& e) {
    emit_error("parse", e.what());
  } catch (const GraphError& e) {
    emit_error("graph", e.what());
  } catch (const SamplingError& e) {
    emit_error("sampling", e.what());
  } catch (const std::invalid_argument& e) {
    emit_error("invalid_argument", e.what());
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
  }
  return 1;
}
