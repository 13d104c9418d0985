#include "fbpt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fbpt/coin.hpp"

namespace fbpt {

namespace {

std::uint64_t synth_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t i, std::uint64_t j = 0) {
  return hash_words(Domain::synth, seed, stream, i, j);
}

std::vector<std::size_t> scaled_degrees(std::span<const double> raw, double scale, std::size_t cap) {
  std::vector<std::size_t> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double d = std::round(raw[i] * scale);
    out[i] = static_cast<std::size_t>(std::clamp(d, 1.0, static_cast<double>(cap)));
  }
  return out;
}

}  // namespace

SynthGraph powerlaw_graph(std::size_t n, double target_avg_outdeg, double exponent, std::uint64_t seed) {
  if (n < 2) throw GraphError("powerlaw_graph: need at least 2 vertices");
  if (!(target_avg_outdeg >= 1.0)) throw GraphError("powerlaw_graph: target average out-degree must be >= 1");
  if (!(exponent >= 2.0 && exponent <= 3.5)) throw GraphError("powerlaw_graph: exponent must lie in [2, 3.5]");
  const std::size_t cap = n - 1;
  if (target_avg_outdeg > static_cast<double>(cap)) {
    throw GraphError("powerlaw_graph: infeasible degree sequence (target mean exceeds n-1)");
  }

  // Inverse CDF of a Pareto law on [1, cap] with density ~ x^-exponent.
  const double a = exponent - 1.0;
  const double tail = std::pow(static_cast<double>(cap), -a);
  std::vector<double> raw(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double u = to_unit(synth_bits(seed, 0, v));
    raw[v] = std::pow(1.0 - u * (1.0 - tail), -1.0 / a);
  }

  // Bisection on the scale so the rounded, clamped degrees average to target.
  const double target_sum = target_avg_outdeg * static_cast<double>(n);
  auto sum_at = [&](double scale) {
    double s = 0.0;
    for (auto d : scaled_degrees(raw, scale, cap)) s += static_cast<double>(d);
    return s;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (sum_at(hi) < target_sum) {
    hi *= 2.0;
    if (hi > 1e18) throw GraphError("powerlaw_graph: infeasible degree sequence");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sum_at(mid) < target_sum ? lo : hi) = mid;
  }
  const auto degrees = scaled_degrees(raw, hi, cap);

  // Floyd's sampling of distinct destinations from the n-1 other vertices.
  std::vector<std::pair<vertex_id, vertex_id>> edges;
  edges.reserve(static_cast<std::size_t>(target_sum * 1.05));
  std::unordered_set<std::uint64_t> picked;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t d = degrees[v];
    picked.clear();
    for (std::size_t j = cap - d; j < cap; ++j) {
      const auto t = to_range(synth_bits(seed, 1, v, j), j + 1);
      picked.insert(picked.count(t) ? j : t);
    }
    for (auto t : picked) {
      const auto dst = static_cast<vertex_id>(t >= v ? t + 1 : t);
      edges.emplace_back(static_cast<vertex_id>(v), dst);
    }
  }

  SynthGraph out{from_edge_pairs(n, edges), {}};
  auto& r = out.report;
  r.num_vertices = n;
  r.num_edges = out.graph.num_edges();
  r.target_avg_outdeg = target_avg_outdeg;
  r.realized_avg_outdeg = static_cast<double>(r.num_edges) / static_cast<double>(n);
  r.exponent = exponent;
  r.seed = seed;
  for (vertex_id v = 0; v < n; ++v) r.max_out_degree = std::max(r.max_out_degree, out.graph.out_degree(v));
  return out;
}

}  // namespace fbpt
