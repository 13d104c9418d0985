#include "fbpt/engine.hpp"

#include <algorithm>
#include <barrier>
#include <chrono>
#include <exception>
#include <memory>
#include <mutex>
#include <new>
#include <thread>

namespace fbpt {

std::vector<vertex_id> make_sources(std::size_t n, std::uint64_t theta, std::uint64_t seed, SourcePolicy policy) {
  if (n == 0) throw std::invalid_argument("make_sources: graph has no vertices");
  std::vector<vertex_id> out(theta);
  for (std::uint64_t i = 0; i < theta; ++i) {
    out[i] = static_cast<vertex_id>(to_range(hash_words(Domain::source, seed, i), n));
  }
  if (policy == SourcePolicy::sorted) std::sort(out.begin(), out.end());
  return out;
}

void SamplingPlan::validate() const {
  if (theta < 1) throw std::invalid_argument("theta must be >= 1");
  if (colors_per_group < 1) throw std::invalid_argument("colors per group must be >= 1");
  if (colors_per_group > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("colors per group too large");
  }
  for (const auto& pool : worker_pools) {
    if (pool.workers < 1) throw std::invalid_argument("worker pool needs at least one worker");
    if (pool.colors_per_claim < 1) throw std::invalid_argument("colors per claim must be >= 1");
    if (pool.cooperative_group < 1) throw std::invalid_argument("cooperative group size must be >= 1");
    if (!(pool.slowdown >= 1.0)) throw std::invalid_argument("pool slowdown must be >= 1");
  }
}

std::vector<WorkerPool> SamplingPlan::effective_pools() const {
  if (worker_pools.empty()) return {WorkerPool{1, colors_per_group, 1, 1.0}};
  return worker_pools;
}

WorkCounter::Claim WorkCounter::claim(std::uint64_t count) noexcept {
  const std::uint64_t begin = next_.fetch_add(count, std::memory_order_relaxed);
  if (begin >= total_) return {total_, total_};
  return {begin, std::min(total_, begin + count)};
}

std::uint64_t RrrSetCollection::total_members() const noexcept {
  std::uint64_t total = 0;
  for (const auto& s : sets) total += s.members.size();
  return total;
}

void RrrSetCollection::canonicalize() {
  std::sort(sets.begin(), sets.end(), [](const RrrSet& a, const RrrSet& b) {
    return a.group_id != b.group_id ? a.group_id < b.group_id : a.color_id < b.color_id;
  });
}

std::uint64_t RrrSetCollection::canonical_hash() const noexcept {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFFU;
      h *= 1099511628211ULL;
    }
  };
  mix(num_vertices);
  mix(sets.size());
  for (const auto& s : sets) {
    mix(s.group_id);
    mix(s.color_id);
    mix(s.origin);
    mix(s.members.size());
    for (vertex_id v : s.members) mix(v);
  }
  return h;
}

namespace {

using Clock = std::chrono::steady_clock;

struct SharedRun {
  const CsrGraph& gT;
  const SamplingPlan& plan;
  std::span<const vertex_id> sources;
  WorkCounter counter;
  std::atomic<bool> abort{false};
  std::atomic<std::uint64_t> stored_members{0};
  std::mutex error_mutex{};
  std::exception_ptr error{};

  void fail(std::exception_ptr e) {
    std::lock_guard lock(error_mutex);
    if (!error) error = std::move(e);
    abort.store(true);
  }
};

struct WorkerOutput {
  std::vector<RrrSet> sets;
  RunMetrics metrics;
  PoolStats stats;
};

// Runs sample indices [begin, end) as one fused traversal of `width` colors.
void process_range(SharedRun& run, TraversalState& state, std::uint64_t begin, std::uint64_t end,
                   std::size_t width, WorkerOutput& out) {
  const std::uint64_t C = run.plan.colors_per_group;
  const std::uint64_t first_group = begin / C;
  try {
    std::vector<vertex_id> srcs(std::max<std::size_t>(width, static_cast<std::size_t>(end - begin)), kInactiveSource);
    for (std::uint64_t i = begin; i < end; ++i) srcs[i - begin] = run.sources[i];

    if (first_group == (end - 1) / C) {
      GroupCoinPolicy coin(run.plan.base_seed, first_group, static_cast<std::uint32_t>(begin % C));
      out.metrics += state.run(run.gT, srcs, coin);
    } else {
      std::vector<SlotCoinPolicy::Slot> slots;
      slots.reserve(end - begin);
      for (std::uint64_t i = begin; i < end; ++i) {
        slots.push_back({GroupCoin(run.plan.base_seed, i / C), static_cast<std::uint32_t>(i % C)});
      }
      out.metrics += state.run(run.gT, srcs, SlotCoinPolicy(std::move(slots)));
    }

    auto members = state.members_by_color();
    for (std::uint64_t i = begin; i < end; ++i) {
      auto& m = members[i - begin];
      if (run.plan.max_rrr_members != 0) {
        const auto stored = run.stored_members.fetch_add(m.size()) + m.size();
        if (stored > run.plan.max_rrr_members) {
          throw SamplingError(i / C, "RRR storage budget of " + std::to_string(run.plan.max_rrr_members) +
                                         " members exceeded");
        }
      }
      out.sets.push_back({run.sources[i], i / C, static_cast<std::uint32_t>(i % C), std::move(m)});
    }
  } catch (const std::bad_alloc&) {
    throw SamplingError(first_group, "out of memory while storing RRR sets");
  }
}

void throttle(double slowdown, Clock::duration busy) {
  if (slowdown > 1.0) {
    std::this_thread::sleep_for(std::chrono::duration_cast<Clock::duration>(busy * (slowdown - 1.0)));
  }
}

void solo_worker(SharedRun& run, const WorkerPool& pool, WorkerOutput& out) {
  TraversalState state;
  try {
    while (!run.abort.load(std::memory_order_relaxed)) {
      const auto claim = run.counter.claim(pool.colors_per_claim);
      if (claim.empty()) break;
      const auto t0 = Clock::now();
      process_range(run, state, claim.begin, claim.end, pool.colors_per_claim, out);
      const auto busy = Clock::now() - t0;
      throttle(pool.slowdown, busy);
      ++out.stats.claims;
      out.stats.colors += claim.size();
      out.stats.busy_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    }
  } catch (...) {
    run.fail(std::current_exception());
  }
}

// Workers of one cooperative team: the leader claims, every member takes a
// contiguous slice of the claim.
struct Team {
  explicit Team(std::size_t size) : members(size), sync(static_cast<std::ptrdiff_t>(size)) {}
  std::size_t members;
  std::barrier<> sync;
  WorkCounter::Claim current;
};

void team_worker(SharedRun& run, const WorkerPool& pool, Team& team, std::size_t rank, WorkerOutput& out) {
  TraversalState state;
  const std::size_t k = team.members;
  const std::size_t slice_width = (pool.colors_per_claim + k - 1) / k;
  while (true) {
    if (rank == 0) {
      team.current = run.abort.load() ? WorkCounter::Claim{} : run.counter.claim(pool.colors_per_claim);
    }
    team.sync.arrive_and_wait();
    const auto claim = team.current;
    if (claim.empty()) break;
    const std::uint64_t per = (claim.size() + k - 1) / k;
    const std::uint64_t b = std::min(claim.end, claim.begin + per * rank);
    const std::uint64_t e = std::min(claim.end, b + per);
    const auto t0 = Clock::now();
    if (b < e && !run.abort.load()) {
      try {
        process_range(run, state, b, e, slice_width, out);
        throttle(pool.slowdown, Clock::now() - t0);
      } catch (...) {
        run.fail(std::current_exception());
      }
    }
    if (rank == 0) ++out.stats.claims;
    out.stats.colors += e - b;
    out.stats.busy_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    team.sync.arrive_and_wait();
  }
}

}  // namespace

SamplingResult run_sampling(const CsrGraph& gT, const SamplingPlan& plan) {
  plan.validate();
  const auto sources = make_sources(gT.num_vertices(), plan.theta, plan.base_seed, plan.source_policy);
  return run_sampling(gT, plan, sources);
}

SamplingResult run_sampling(const CsrGraph& gT, const SamplingPlan& plan, std::span<const vertex_id> sources) {
  plan.validate();
  if (sources.size() != plan.theta) throw std::invalid_argument("source count differs from theta");
  for (vertex_id s : sources) {
    if (s >= gT.num_vertices()) throw GraphError("source " + std::to_string(s) + " out of range");
  }
  const auto t0 = Clock::now();
  const auto pools = plan.effective_pools();
  SharedRun run{gT, plan, sources, WorkCounter(plan.theta)};

  std::vector<std::unique_ptr<Team>> teams;
  std::vector<WorkerOutput> outputs;
  std::vector<std::size_t> pool_of;
  struct Launch {
    std::size_t pool;
    Team* team;
    std::size_t rank;
  };
  std::vector<Launch> launches;
  for (std::size_t p = 0; p < pools.size(); ++p) {
    const auto& pool = pools[p];
    if (pool.cooperative_group <= 1) {
      for (std::size_t w = 0; w < pool.workers; ++w) launches.push_back({p, nullptr, 0});
      continue;
    }
    for (std::size_t w = 0; w < pool.workers; w += pool.cooperative_group) {
      const std::size_t size = std::min(pool.cooperative_group, pool.workers - w);
      teams.push_back(std::make_unique<Team>(size));
      for (std::size_t r = 0; r < size; ++r) launches.push_back({p, teams.back().get(), r});
    }
  }
  outputs.resize(launches.size());

  auto body = [&](std::size_t i) {
    const auto& l = launches[i];
    if (l.team) {
      team_worker(run, pools[l.pool], *l.team, l.rank, outputs[i]);
    } else {
      solo_worker(run, pools[l.pool], outputs[i]);
    }
  };
  if (launches.size() == 1) {
    body(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(launches.size());
    for (std::size_t i = 0; i < launches.size(); ++i) threads.emplace_back(body, i);
  }
  if (run.error) std::rethrow_exception(run.error);

  SamplingResult result;
  result.rrr.num_vertices = gT.num_vertices();
  result.rrr.colors_per_group = plan.colors_per_group;
  result.rrr.sets.reserve(plan.theta);
  result.pools.resize(pools.size());
  for (std::size_t i = 0; i < launches.size(); ++i) {
    auto& out = outputs[i];
    for (auto& s : out.sets) result.rrr.sets.push_back(std::move(s));
    result.metrics += out.metrics;
    auto& ps = result.pools[launches[i].pool];
    ps.claims += out.stats.claims;
    ps.colors += out.stats.colors;
    ps.busy_seconds += out.stats.busy_seconds;
  }
  result.rrr.canonicalize();
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return result;
}

std::vector<BatchMeasurement> measure_pools(const CsrGraph& gT, const SamplingPlan& plan,
                                            std::span<const vertex_id> sources, std::size_t batches) {
  plan.validate();
  if (sources.empty()) throw std::invalid_argument("measure_pools needs sources");
  if (batches == 0) throw std::invalid_argument("measure_pools needs at least one batch");
  const auto pools = plan.effective_pools();
  std::vector<BatchMeasurement> out;
  SharedRun run{gT, plan, sources, WorkCounter(sources.size())};
  std::uint64_t cursor = 0;
  for (std::size_t p = 0; p < pools.size(); ++p) {
    const auto& pool = pools[p];
    TraversalState state;
    double total = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      std::uint64_t begin = cursor;
      if (begin + pool.colors_per_claim > sources.size()) begin = 0;
      std::uint64_t end = std::min<std::uint64_t>(sources.size(), begin + pool.colors_per_claim);
      cursor = end;
      WorkerOutput scratch;
      const auto t0 = Clock::now();
      process_range(run, state, begin, end, pool.colors_per_claim, scratch);
      throttle(pool.slowdown, Clock::now() - t0);
      total += std::chrono::duration<double>(Clock::now() - t0).count();
    }
    out.push_back({p, total / static_cast<double>(batches), pool.colors_per_claim});
  }
  return out;
}

}  // namespace fbpt
