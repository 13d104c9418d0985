#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fbpt/graph.hpp"

namespace fbpt {

// A vertex relabeling. perm[i] is the original vertex placed at position i,
// ready for apply_permutation.
struct Ordering {
  std::string name;
  std::vector<vertex_id> perm;
};

Ordering identity_order(std::size_t n);
Ordering random_order(std::size_t n, std::uint64_t seed);
// Descending out-degree, ties by original id.
Ordering degree_order(const CsrGraph& g);
// Reverse Cuthill-McKee on the symmetrized adjacency.
Ordering rcm_order(const CsrGraph& g);
// Label-propagation clusters laid out contiguously, largest cluster first.
Ordering cluster_order(const CsrGraph& g, std::uint64_t seed);

// "none" | "random" | "degree" | "rcm" | "cluster"
Ordering make_ordering(const std::string& name, const CsrGraph& g, std::uint64_t seed);

// Undirected neighbor lists (union of in and out edges), sorted and unique.
std::vector<std::vector<vertex_id>> symmetrized_adjacency(const CsrGraph& g);

// Synchronous label propagation: every round each vertex takes the most
// frequent label among itself and its neighbors, smallest label on ties.
// Initial labels are a seeded shuffle of the ids.
std::vector<vertex_id> label_propagation(const CsrGraph& g, std::uint64_t seed, std::size_t max_rounds = 20);

// max |u - v| over all edges.
std::size_t bandwidth(const CsrGraph& g);

// Newman modularity of `labels` on the symmetrized graph.
double modularity(const CsrGraph& g, std::span<const vertex_id> labels);

// Newline-separated permutation files.
void write_ordering(std::ostream& out, std::span<const vertex_id> perm);
std::vector<vertex_id> read_ordering(std::istream& in);

}  // namespace fbpt
