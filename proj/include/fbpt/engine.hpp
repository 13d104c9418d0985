#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbpt/fused_bpt.hpp"
#include "fbpt/graph.hpp"
#include "fbpt/metrics.hpp"

namespace fbpt {

enum class SourcePolicy { random, sorted };

// Draws theta start vertices i.i.d. uniform over 0..n-1, keyed by (seed, i).
// The sorted policy sorts them ascending before they are chunked into groups.
std::vector<vertex_id> make_sources(std::size_t n, std::uint64_t theta, std::uint64_t seed, SourcePolicy policy);

// A set of identical workers. Each claim takes `colors_per_claim` consecutive
// sample indices and runs them as one fused traversal. With
// `cooperative_group` > 1, that many workers share every claim and split its
// colors between them.
struct WorkerPool {
  std::size_t workers = 1;
  std::size_t colors_per_claim = 64;
  std::size_t cooperative_group = 1;
  // Artificial throttle (>= 1) used to emulate slower hardware: after each
  // claim the worker idles for (slowdown - 1) times the claim's busy time.
  double slowdown = 1.0;
};

struct SamplingPlan {
  std::uint64_t theta = 0;
  std::size_t colors_per_group = 64;
  std::uint64_t base_seed = 0;
  SourcePolicy source_policy = SourcePolicy::random;
  std::vector<WorkerPool> worker_pools;  // empty: one pool, one worker, full groups
  std::uint64_t max_rrr_members = 0;      // 0: unlimited

  std::uint64_t num_groups() const noexcept {
    return colors_per_group == 0 ? 0 : (theta + colors_per_group - 1) / colors_per_group;
  }
  // Throws std::invalid_argument on a bad plan.
  void validate() const;
  // Pools with empty or zero-sized entries replaced by defaults.
  std::vector<WorkerPool> effective_pools() const;
};

// Hands out consecutive index ranges; every index in 0..total is returned to
// exactly one caller.
class WorkCounter {
 public:
  struct Claim {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;
    bool empty() const noexcept { return begin >= end; }
    std::uint64_t size() const noexcept { return end - begin; }
  };

  explicit WorkCounter(std::uint64_t total) : total_(total) {}
  Claim claim(std::uint64_t count) noexcept;
  std::uint64_t total() const noexcept { return total_; }

 private:
  std::atomic<std::uint64_t> next_{0};
  std::uint64_t total_;
};

struct RrrSetCollection {
  std::size_t num_vertices = 0;
  std::size_t colors_per_group = 0;
  std::vector<RrrSet> sets;  // canonical order: (group_id, color_id)

  std::uint64_t theta() const noexcept { return sets.size(); }
  std::uint64_t total_members() const noexcept;
  // FNV-1a over the canonical serialization.
  std::uint64_t canonical_hash() const noexcept;
  void canonicalize();
};

class SamplingError : public std::runtime_error {
 public:
  SamplingError(std::uint64_t group_id, const std::string& what)
      : std::runtime_error("group " + std::to_string(group_id) + ": " + what), group_id_(group_id) {}
  std::uint64_t group_id() const noexcept { return group_id_; }

 private:
  std::uint64_t group_id_;
};

struct PoolStats {
  std::uint64_t claims = 0;
  std::uint64_t colors = 0;
  double busy_seconds = 0.0;
};

struct SamplingResult {
  RrrSetCollection rrr;
  RunMetrics metrics;
  std::vector<PoolStats> pools;
  double wall_seconds = 0.0;
};

// Sample index i runs with coin key (seed, i / C, edge, i % C) from
// sources[i], whatever claim it lands in; the canonical collection is
// therefore identical for every pool layout and worker count.
SamplingResult run_sampling(const CsrGraph& gT, const SamplingPlan& plan);
SamplingResult run_sampling(const CsrGraph& gT, const SamplingPlan& plan, std::span<const vertex_id> sources);

struct BatchMeasurement {
  std::size_t pool_id = 0;
  double batch_time = 0.0;  // seconds for one claim
  std::size_t colors_per_claim = 0;
};

// Times `batches` claims per pool on a single worker of that pool.
std::vector<BatchMeasurement> measure_pools(const CsrGraph& gT, const SamplingPlan& plan,
                                            std::span<const vertex_id> sources, std::size_t batches);

struct BalanceConfig {
  double tolerance = 0.10;
  std::size_t group_size = 6;  // workers merged into one cooperative claim
};

struct PoolBalance {
  std::size_t pool_id = 0;
  std::size_t initial_colors = 0;
  std::size_t colors_per_claim = 0;
  std::size_t iterations = 0;
  double predicted_claim_time = 0.0;
  bool converged = false;
  bool needs_grouping = false;
  std::size_t cooperative_group = 1;
};

struct BalanceResult {
  std::size_t reference_pool = 0;
  double reference_claim_time = 0.0;
  std::vector<PoolBalance> pools;  // ordered by pool_id
};

BalanceResult balance_workers(std::span<const BatchMeasurement> measured, const BalanceConfig& config = {});

// Copies the balanced claim sizes and grouping into the plan's pools.
void apply_balance(SamplingPlan& plan, const BalanceResult& balance);

}  // namespace fbpt
