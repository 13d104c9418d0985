#pragma once

#include <cstdint>

#include "fbpt/graph.hpp"

namespace fbpt {

struct SynthReport {
  std::size_t num_vertices = 0;
  std::size_t num_edges = 0;
  double target_avg_outdeg = 0.0;
  double realized_avg_outdeg = 0.0;
  double exponent = 0.0;
  std::size_t max_out_degree = 0;
  std::uint64_t seed = 0;
};

struct SynthGraph {
  CsrGraph graph;
  SynthReport report;
};

// Directed configuration-model graph with power-law out-degrees: degrees are
// drawn from a Pareto law truncated to [1, n-1], scaled so their mean hits the
// target, and each vertex links to that many distinct uniform destinations.
SynthGraph powerlaw_graph(std::size_t n, double target_avg_outdeg, double exponent, std::uint64_t seed);

}  // namespace fbpt
