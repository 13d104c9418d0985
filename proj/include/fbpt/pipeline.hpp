#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbpt/engine.hpp"
#include "fbpt/graph.hpp"
#include "fbpt/metrics.hpp"
#include "fbpt/reorder.hpp"
#include "fbpt/seedselect.hpp"

namespace fbpt {

struct ImmOptions {
  std::uint64_t theta = 10000;
  std::size_t colors = 64;
  std::int64_t k = 50;
  std::uint64_t seed = 0;
  std::string order = "none";
  bool sorted_sources = false;
  std::size_t workers = 1;
  std::string prob_model = "uniform";
};

struct ImmTimings {
  double weights = 0.0;
  double reorder = 0.0;
  double transpose = 0.0;
  double sampling = 0.0;
  double selection = 0.0;
  double total = 0.0;
};

struct ImmResult {
  ImmOptions options;
  std::string prob_model;  // resolved description
  std::size_t num_vertices = 0;
  std::size_t num_edges = 0;
  SeedResult selection;  // seeds in original ids
  std::uint64_t rrr_hash = 0;
  std::uint64_t rrr_total_members = 0;
  RunMetrics metrics;
  ImmTimings timings;
};

// Full RIS pipeline on an unweighted forward graph: weights, optional
// reordering, transpose, fused sampling, greedy selection. RRR sets are
// mapped back to original ids before selection and hashing.
ImmResult run_imm(const CsrGraph& forward, const ImmOptions& options);

// Same as run_imm but returns the RRR collection in original ids as well.
struct ImmRun {
  ImmResult result;
  RrrSetCollection rrr;
};
ImmRun run_imm_with_sets(const CsrGraph& forward, const ImmOptions& options);

// Relabels members and origins of every set through `new_to_old`.
void map_to_original(RrrSetCollection& rrr, std::span<const vertex_id> new_to_old);

std::string to_json(const ImmResult& result, bool with_timings = true);

// One group of a coupled fused-versus-unfused comparison.
struct CoupledGroup {
  std::uint64_t group_id = 0;
  RunMetrics fused;
  RunMetrics unfused;
  bool sets_match = true;
};

struct CoupledStudy {
  std::vector<CoupledGroup> groups;
  RunMetrics fused;
  RunMetrics unfused;
  bool all_match = true;
  double wall_seconds = 0.0;
};

// Runs theta sampled traversals in groups of `colors`, each group both fused
// and as individual BPTs with identical coin keys, and compares the visited sets.
CoupledStudy coupled_study(const CsrGraph& gT, std::span<const vertex_id> sources, std::size_t colors,
                           std::uint64_t seed, std::size_t workers);

}  // namespace fbpt
