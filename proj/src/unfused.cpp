#include <algorithm>
#include <chrono>

#include "fbpt/fused_bpt.hpp"

namespace fbpt {

// Baseline: one BPT at a time with plain per-vertex flags. Shares nothing with
// the fused kernel except the coin keys.
UnfusedResult unfused_traverse(const CsrGraph& gT, vertex_id source, std::uint64_t group_id,
                               std::uint32_t color_id, std::uint64_t base_seed) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = gT.num_vertices();
  if (source >= n) throw GraphError("source " + std::to_string(source) + " out of range");

  std::vector<std::uint8_t> visited(n, 0);
  std::vector<std::uint8_t> in_next(n, 0);
  std::vector<vertex_id> frontier{source};
  std::vector<vertex_id> next;
  std::vector<vertex_id> reached;
  UnfusedResult result;
  auto& m = result.metrics;
  m.traversals = 1;
  std::uint32_t level = 0;

  while (!frontier.empty()) {
    for (vertex_id v : frontier) {
      visited[v] = 1;
      in_next[v] = 0;
      reached.push_back(v);
      ++m.vertex_pops;
      m.record_event(level, 1, 1);
    }
    for (vertex_id v : frontier) {
      for (edge_index e = gT.edge_begin(v); e < gT.edge_end(v); ++e) {
        const vertex_id u = gT.col_indices()[e];
        if (visited[u]) continue;
        ++m.edge_evaluations;
        ++m.edge_bit_evaluations;
        const CoinKey key{base_seed, group_id, gT.edge_global_id()[e], color_id};
        if (edge_passes(key, gT.edge_prob()[e]) && !in_next[u]) {
          in_next[u] = 1;
          next.push_back(u);
        }
      }
    }
    frontier.swap(next);
    next.clear();
    ++level;
    ++m.levels;
  }
  std::sort(reached.begin(), reached.end());
  result.visited = std::move(reached);
  m.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace fbpt
