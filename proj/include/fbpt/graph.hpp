#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fbpt {

using vertex_id = std::uint32_t;
using edge_index = std::uint64_t;
using edge_id = std::uint64_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public GraphError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Immutable CSR adjacency with per-edge activation probability and a stable
// edge identifier that survives transposition and relabeling.
class CsrGraph {
 public:
  CsrGraph() = default;
  CsrGraph(std::vector<edge_index> row_offsets, std::vector<vertex_id> col_indices,
           std::vector<float> edge_prob, std::vector<edge_id> edge_global_id);

  std::size_t num_vertices() const noexcept {
    return row_offsets_.empty() ? 0 : row_offsets_.size() - 1;
  }
  std::size_t num_edges() const noexcept { return col_indices_.size(); }

  std::size_t out_degree(vertex_id v) const noexcept {
    return static_cast<std::size_t>(row_offsets_[v + 1] - row_offsets_[v]);
  }
  edge_index edge_begin(vertex_id v) const noexcept { return row_offsets_[v]; }
  edge_index edge_end(vertex_id v) const noexcept { return row_offsets_[v + 1]; }

  std::span<const vertex_id> neighbors(vertex_id v) const noexcept {
    return {col_indices_.data() + row_offsets_[v], out_degree(v)};
  }

  std::span<const edge_index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const vertex_id> col_indices() const noexcept { return col_indices_; }
  std::span<const float> edge_prob() const noexcept { return edge_prob_; }
  std::span<const edge_id> edge_global_id() const noexcept { return edge_global_id_; }

  // Throws GraphError describing the first violated structural invariant.
  void validate() const;

  // Returns a copy with the given probability array; size must equal num_edges().
  CsrGraph with_probabilities(std::vector<float> probs) const;

  bool operator==(const CsrGraph&) const = default;

 private:
  std::vector<edge_index> row_offsets_{0};
  std::vector<vertex_id> col_indices_;
  std::vector<float> edge_prob_;
  std::vector<edge_id> edge_global_id_;
};

// Parses a SNAP-style whitespace edge list. Vertex ids are densified in order
// of first appearance; self-loops are dropped and duplicates collapsed.
CsrGraph load_edge_list(std::istream& in);
CsrGraph load_edge_list_file(const std::string& path);

// Writes `u v` lines (dense ids), one per edge, in CSR order.
void write_edge_list(const CsrGraph& g, std::ostream& out);

// Builds a cleaned graph directly from dense (u, v) pairs. Used by the
// synthetic generators; applies the same cleaning rules as the text loader.
CsrGraph from_edge_pairs(std::size_t num_vertices,
                         std::span<const std::pair<vertex_id, vertex_id>> edges);

struct UniformWeights {
  std::uint64_t seed;
};
struct ConstantWeight {
  double p;
};
struct WeightedCascade {};
using WeightModel = std::variant<UniformWeights, ConstantWeight, WeightedCascade>;

CsrGraph assign_weights(const CsrGraph& g, const WeightModel& model);

// Parses "uniform", "uniform:<seed>", "constant:<p>", "wc" / "weighted_cascade".
// `default_seed` is used for a bare "uniform".
WeightModel parse_weight_model(const std::string& text, std::uint64_t default_seed);
std::string describe(const WeightModel& model);

CsrGraph transpose(const CsrGraph& g);

struct PermutedGraph {
  CsrGraph graph;
  std::vector<vertex_id> old_to_new;
};

// `new_to_old[i]` is the original vertex placed at position i.
PermutedGraph apply_permutation(const CsrGraph& g, std::span<const vertex_id> new_to_old);

// Inverts a permutation; throws GraphError if it is not a bijection on 0..n-1.
std::vector<vertex_id> invert_permutation(std::span<const vertex_id> perm);

std::vector<std::size_t> in_degrees(const CsrGraph& g);

// Binary cache: little-endian {"FBPT", u32 version, u64 n, u64 m} followed by
// row_offsets (u64), col_indices (u32), edge_prob (f32), edge_global_id (u64).
inline constexpr std::uint32_t kCacheVersion = 1;
void write_binary(const CsrGraph& g, std::ostream& out);
CsrGraph read_binary(std::istream& in);

// Dispatches on the file's leading magic: binary cache or text edge list.
CsrGraph load_graph(const std::string& path);

}  // namespace fbpt
