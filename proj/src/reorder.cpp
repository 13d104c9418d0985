#include "fbpt/reorder.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "fbpt/coin.hpp"

namespace fbpt {

Ordering identity_order(std::size_t n) {
  Ordering o{"none", std::vector<vertex_id>(n)};
  std::iota(o.perm.begin(), o.perm.end(), vertex_id{0});
  return o;
}

Ordering random_order(std::size_t n, std::uint64_t seed) {
  Ordering o = identity_order(n);
  o.name = "random";
  for (std::size_t i = n; i > 1; --i) {
    const auto j = to_range(hash_words(Domain::order, seed, i), i);
    std::swap(o.perm[i - 1], o.perm[j]);
  }
  return o;
}

Ordering degree_order(const CsrGraph& g) {
  Ordering o = identity_order(g.num_vertices());
  o.name = "degree";
  std::stable_sort(o.perm.begin(), o.perm.end(),
                   [&](vertex_id a, vertex_id b) { return g.out_degree(a) > g.out_degree(b); });
  return o;
}

std::vector<std::vector<vertex_id>> symmetrized_adjacency(const CsrGraph& g) {
  std::vector<std::vector<vertex_id>> adj(g.num_vertices());
  for (vertex_id u = 0; u < g.num_vertices(); ++u) {
    for (vertex_id v : g.neighbors(u)) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

Ordering rcm_order(const CsrGraph& g) {
  const std::size_t n = g.num_vertices();
  const auto adj = symmetrized_adjacency(g);
  auto by_degree = [&](vertex_id a, vertex_id b) {
    return adj[a].size() != adj[b].size() ? adj[a].size() < adj[b].size() : a < b;
  };
  std::vector<vertex_id> roots(n);
  std::iota(roots.begin(), roots.end(), vertex_id{0});
  std::sort(roots.begin(), roots.end(), by_degree);

  std::vector<std::uint8_t> seen(n, 0);
  std::vector<vertex_id> order;
  order.reserve(n);
  std::vector<vertex_id> fresh;
  for (vertex_id root : roots) {
    if (seen[root]) continue;
    seen[root] = 1;
    std::size_t head = order.size();
    order.push_back(root);
    while (head < order.size()) {
      const vertex_id v = order[head++];
      fresh.clear();
      for (vertex_id u : adj[v]) {
        if (!seen[u]) {
          seen[u] = 1;
          fresh.push_back(u);
        }
      }
      std::sort(fresh.begin(), fresh.end(), by_degree);
      order.insert(order.end(), fresh.begin(), fresh.end());
    }
  }
  std::reverse(order.begin(), order.end());
  return {"rcm", std::move(order)};
}

std::vector<vertex_id> label_propagation(const CsrGraph& g, std::uint64_t seed, std::size_t max_rounds) {
  const std::size_t n = g.num_vertices();
  const auto adj = symmetrized_adjacency(g);
  std::vector<vertex_id> labels = random_order(n, seed).perm;
  std::vector<vertex_id> next(n);
  std::unordered_map<vertex_id, std::uint32_t> counts;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    bool changed = false;
    for (vertex_id v = 0; v < n; ++v) {
      counts.clear();
      ++counts[labels[v]];
      for (vertex_id u : adj[v]) ++counts[labels[u]];
      vertex_id best = labels[v];
      std::uint32_t best_count = 0;
      for (auto [label, count] : counts) {
        if (count > best_count || (count == best_count && label < best)) {
          best = label;
          best_count = count;
        }
      }
      next[v] = best;
      changed |= best != labels[v];
    }
    labels.swap(next);
    if (!changed) break;
  }
  return labels;
}

Ordering cluster_order(const CsrGraph& g, std::uint64_t seed) {
  const auto labels = label_propagation(g, seed);
  std::unordered_map<vertex_id, std::size_t> size;
  for (vertex_id l : labels) ++size[l];
  Ordering o = identity_order(g.num_vertices());
  o.name = "cluster";
  std::sort(o.perm.begin(), o.perm.end(), [&](vertex_id a, vertex_id b) {
    const vertex_id la = labels[a];
    const vertex_id lb = labels[b];
    if (la != lb) return size[la] != size[lb] ? size[la] > size[lb] : la < lb;
    return a < b;
  });
  return o;
}

Ordering make_ordering(const std::string& name, const CsrGraph& g, std::uint64_t seed) {
  if (name == "none" || name == "identity") return identity_order(g.num_vertices());
  if (name == "random") return random_order(g.num_vertices(), seed);
  if (name == "degree" || name == "degree_desc") return degree_order(g);
  if (name == "rcm") return rcm_order(g);
  if (name == "cluster") return cluster_order(g, seed);
  throw std::invalid_argument("unknown ordering '" + name + "'");
}

std::size_t bandwidth(const CsrGraph& g) {
  std::size_t bw = 0;
  for (vertex_id u = 0; u < g.num_vertices(); ++u) {
    for (vertex_id v : g.neighbors(u)) bw = std::max<std::size_t>(bw, u > v ? u - v : v - u);
  }
  return bw;
}

double modularity(const CsrGraph& g, std::span<const vertex_id> labels) {
  const auto adj = symmetrized_adjacency(g);
  double two_m = 0.0;
  for (const auto& list : adj) two_m += static_cast<double>(list.size());
  if (two_m == 0.0) return 0.0;
  std::unordered_map<vertex_id, double> inside;
  std::unordered_map<vertex_id, double> degree;
  for (vertex_id v = 0; v < adj.size(); ++v) {
    degree[labels[v]] += static_cast<double>(adj[v].size());
    for (vertex_id u : adj[v]) {
      if (labels[u] == labels[v]) inside[labels[v]] += 1.0;
    }
  }
  double q = 0.0;
  for (auto [label, d] : degree) q += inside[label] / two_m - (d / two_m) * (d / two_m);
  return q;
}

void write_ordering(std::ostream& out, std::span<const vertex_id> perm) {
  for (vertex_id v : perm) out << v << '\n';
}

std::vector<vertex_id> read_ordering(std::istream& in) {
  std::vector<vertex_id> perm;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    try {
      std::size_t used = 0;
      const auto v = std::stoull(line, &used);
      if (line.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("trailing");
      perm.push_back(static_cast<vertex_id>(v));
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "expected a vertex id, got '" + line + "'");
    }
  }
  invert_permutation(perm);
  return perm;
}

}  // namespace fbpt
