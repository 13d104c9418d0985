#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "fbpt/graph.hpp"

namespace testing {

using fbpt::CsrGraph;
using fbpt::vertex_id;

// Erdos-Renyi style directed graph from std::mt19937_64, independent of the
// library's own hashing.
inline CsrGraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<vertex_id> pick(0, static_cast<vertex_id>(n - 1));
  std::vector<std::pair<vertex_id, vertex_id>> edges;
  for (std::size_t i = 0; i < m; ++i) edges.emplace_back(pick(rng), pick(rng));
  return fbpt::from_edge_pairs(n, edges);
}

inline CsrGraph path_graph(std::size_t n) {
  std::vector<std::pair<vertex_id, vertex_id>> edges;
  for (vertex_id v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return fbpt::from_edge_pairs(n, edges);
}

inline CsrGraph from_pairs(std::size_t n, std::vector<std::pair<vertex_id, vertex_id>> edges) {
  return fbpt::from_edge_pairs(n, edges);
}

// Vertices reachable from `source` following every edge.
inline std::vector<vertex_id> bfs_reachable(const CsrGraph& g, vertex_id source) {
  std::vector<char> seen(g.num_vertices(), 0);
  std::deque<vertex_id> q{source};
  seen[source] = 1;
  while (!q.empty()) {
    const vertex_id v = q.front();
    q.pop_front();
    for (vertex_id u : g.neighbors(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        q.push_back(u);
      }
    }
  }
  std::vector<vertex_id> out;
  for (vertex_id v = 0; v < g.num_vertices(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

// Plain greedy: rescans every vertex each round, smallest id wins ties.
inline std::vector<vertex_id> naive_greedy(std::span<const std::vector<vertex_id>> sets, std::size_t n,
                                           std::size_t k) {
  std::vector<char> covered(sets.size(), 0);
  std::vector<char> used(n, 0);
  std::vector<vertex_id> seeds;
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best_gain = 0;
    vertex_id best = 0;
    bool found = false;
    for (vertex_id v = 0; v < n; ++v) {
      if (used[v]) continue;
      std::size_t gain = 0;
      for (std::size_t s = 0; s < sets.size(); ++s) {
        if (!covered[s] && std::find(sets[s].begin(), sets[s].end(), v) != sets[s].end()) ++gain;
      }
      if (!found || gain > best_gain) {
        best = v;
        best_gain = gain;
        found = true;
      }
    }
    used[best] = 1;
    seeds.push_back(best);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      if (std::find(sets[s].begin(), sets[s].end(), best) != sets[s].end()) covered[s] = 1;
    }
  }
  return seeds;
}

inline std::size_t coverage(std::span<const std::vector<vertex_id>> sets, std::span<const vertex_id> seeds) {
  std::size_t c = 0;
  for (const auto& s : sets) {
    for (vertex_id v : seeds) {
      if (std::find(s.begin(), s.end(), v) != s.end()) {
        ++c;
        break;
      }
    }
  }
  return c;
}

// Best coverage over all k-subsets of 0..n-1.
inline std::size_t brute_force_cover(std::span<const std::vector<vertex_id>> sets, std::size_t n, std::size_t k) {
  std::size_t best = 0;
  std::vector<vertex_id> pick;
  auto rec = [&](auto&& self, vertex_id start) -> void {
    if (pick.size() == k) {
      best = std::max(best, coverage(sets, pick));
      return;
    }
    for (vertex_id v = start; v < n; ++v) {
      pick.push_back(v);
      self(self, v + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace testing
