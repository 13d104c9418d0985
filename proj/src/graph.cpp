#include "fbpt/graph.hpp"

#include "fbpt/coin.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace fbpt {

CsrGraph::CsrGraph(std::vector<edge_index> row_offsets, std::vector<vertex_id> col_indices,
                   std::vector<float> edge_prob, std::vector<edge_id> edge_global_id)
    : row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      edge_prob_(std::move(edge_prob)),
      edge_global_id_(std::move(edge_global_id)) {
  validate();
}

void CsrGraph::validate() const {
  if (row_offsets_.empty()) throw GraphError("row_offsets must have n+1 entries");
  if (row_offsets_.front() != 0) throw GraphError("row_offsets[0] must be 0");
  const std::size_t n = num_vertices();
  const std::size_t m = col_indices_.size();
  if (row_offsets_.back() != m) throw GraphError("row_offsets[n] must equal num_edges");
  if (edge_prob_.size() != m || edge_global_id_.size() != m) {
    throw GraphError("per-edge arrays must have num_edges entries");
  }
  if (n > std::numeric_limits<vertex_id>::max()) throw GraphError("too many vertices");
  for (std::size_t v = 0; v < n; ++v) {
    if (row_offsets_[v + 1] < row_offsets_[v]) {
      throw GraphError("row_offsets decreases at vertex " + std::to_string(v));
    }
    for (edge_index e = row_offsets_[v]; e < row_offsets_[v + 1]; ++e) {
      if (col_indices_[e] >= n) throw GraphError("edge " + std::to_string(e) + " target out of range");
      if (col_indices_[e] == v) throw GraphError("self-loop at vertex " + std::to_string(v));
    }
  }
  for (std::size_t e = 0; e < m; ++e) {
    const float p = edge_prob_[e];
    if (!(p >= 0.0f && p <= 1.0f)) throw GraphError("edge " + std::to_string(e) + " probability outside [0,1]");
  }
  std::vector<bool> seen(m, false);
  for (edge_id id : edge_global_id_) {
    if (id >= m || seen[id]) throw GraphError("edge_global_id is not a permutation of 0..m-1");
    seen[id] = true;
  }
}

CsrGraph CsrGraph::with_probabilities(std::vector<float> probs) const {
  if (probs.size() != num_edges()) throw GraphError("probability array size mismatch");
  return CsrGraph(row_offsets_, col_indices_, std::move(probs), edge_global_id_);
}

CsrGraph from_edge_pairs(std::size_t n, std::span<const std::pair<vertex_id, vertex_id>> edges) {
  std::vector<std::pair<vertex_id, vertex_id>> clean;
  clean.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw GraphError("edge endpoint out of range");
    if (u != v) clean.emplace_back(u, v);
  }
  std::sort(clean.begin(), clean.end());
  clean.erase(std::unique(clean.begin(), clean.end()), clean.end());

  std::vector<edge_index> offsets(n + 1, 0);
  std::vector<vertex_id> cols(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    ++offsets[clean[i].first + 1];
    cols[i] = clean[i].second;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<edge_id> ids(clean.size());
  std::iota(ids.begin(), ids.end(), edge_id{0});
  return CsrGraph(std::move(offsets), std::move(cols), std::vector<float>(clean.size(), 0.0f),
                  std::move(ids));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_id(std::string_view tok, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a non-negative integer vertex id, got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

CsrGraph load_edge_list(std::istream& in) {
  std::unordered_map<std::uint64_t, vertex_id> dense;
  std::vector<std::pair<vertex_id, vertex_id>> edges;
  auto densify = [&](std::uint64_t raw) {
    auto [it, inserted] = dense.try_emplace(raw, static_cast<vertex_id>(dense.size()));
    if (inserted && dense.size() > std::numeric_limits<vertex_id>::max()) {
      throw GraphError("too many distinct vertex ids");
    }
    return it->second;
  };

  std::string buf;
  std::size_t line_no = 0;
  while (std::getline(in, buf)) {
    ++line_no;
    std::string_view line = trim(buf);
    if (line.empty() || line.front() == '#' || line.front() == '%') continue;

    std::array<std::string_view, 2> tok;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      if (count == 2) throw ParseError(line_no, "expected exactly two vertex ids");
      tok[count++] = line.substr(pos, end - pos);
      pos = end;
    }
    if (count != 2) throw ParseError(line_no, "expected exactly two vertex ids");
    const vertex_id u = densify(parse_id(tok[0], line_no));
    const vertex_id v = densify(parse_id(tok[1], line_no));
    edges.emplace_back(u, v);
  }
  if (dense.empty()) throw GraphError("empty graph: no edges found");
  return from_edge_pairs(dense.size(), edges);
}

CsrGraph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path);
  return load_edge_list(in);
}

void write_edge_list(const CsrGraph& g, std::ostream& out) {
  for (vertex_id u = 0; u < g.num_vertices(); ++u) {
    for (vertex_id v : g.neighbors(u)) out << u << ' ' << v << '\n';
  }
}

std::vector<std::size_t> in_degrees(const CsrGraph& g) {
  std::vector<std::size_t> deg(g.num_vertices(), 0);
  for (vertex_id v : g.col_indices()) ++deg[v];
  return deg;
}

CsrGraph assign_weights(const CsrGraph& g, const WeightModel& model) {
  std::vector<float> probs(g.num_edges());
  const auto ids = g.edge_global_id();
  if (const auto* u = std::get_if<UniformWeights>(&model)) {
    // 24 random bits keep the value exactly representable and below 1.
    for (std::size_t e = 0; e < probs.size(); ++e) {
      const auto h = hash_words(Domain::weight, u->seed, ids[e]);
      probs[e] = static_cast<float>(h >> 40) * 0x1.0p-24f;
    }
  } else if (const auto* c = std::get_if<ConstantWeight>(&model)) {
    if (!(c->p >= 0.0 && c->p <= 1.0)) {
      throw GraphError("constant probability must lie in [0,1], got " + std::to_string(c->p));
    }
    std::fill(probs.begin(), probs.end(), static_cast<float>(c->p));
  } else {
    const auto indeg = in_degrees(g);
    const auto cols = g.col_indices();
    for (std::size_t e = 0; e < probs.size(); ++e) {
      probs[e] = 1.0f / static_cast<float>(indeg[cols[e]]);
    }
  }
  return g.with_probabilities(std::move(probs));
}

WeightModel parse_weight_model(const std::string& text, std::uint64_t default_seed) {
  auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "uniform") {
    if (arg.empty()) return UniformWeights{default_seed};
    return UniformWeights{std::stoull(arg)};
  }
  if (head == "constant") {
    if (arg.empty()) throw GraphError("constant model needs a probability, e.g. constant:0.1");
    std::size_t used = 0;
    const double p = std::stod(arg, &used);
    if (used != arg.size()) throw GraphError("bad probability '" + arg + "'");
    if (!(p >= 0.0 && p <= 1.0)) throw GraphError("constant probability must lie in [0,1]");
    return ConstantWeight{p};
  }
  if (head == "wc" || head == "weighted_cascade") return WeightedCascade{};
  throw GraphError("unknown probability model '" + text + "'");
}

std::string describe(const WeightModel& model) {
  if (const auto* u = std::get_if<UniformWeights>(&model)) return "uniform:" + std::to_string(u->seed);
  if (const auto* c = std::get_if<ConstantWeight>(&model)) {
    std::ostringstream os;
    os << "constant:" << c->p;
    return os.str();
  }
  return "weighted_cascade";
}

CsrGraph transpose(const CsrGraph& g) {
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  std::vector<edge_index> offsets(n + 1, 0);
  for (vertex_id v : g.col_indices()) ++offsets[v + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  std::vector<edge_index> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<vertex_id> cols(m);
  std::vector<float> probs(m);
  std::vector<edge_id> ids(m);
  // Rows of g are scanned in ascending source order, so each transposed row
  // comes out sorted by its new destination.
  for (vertex_id u = 0; u < n; ++u) {
    for (edge_index e = g.edge_begin(u); e < g.edge_end(u); ++e) {
      const vertex_id v = g.col_indices()[e];
      const edge_index slot = cursor[v]++;
      cols[slot] = u;
      probs[slot] = g.edge_prob()[e];
      ids[slot] = g.edge_global_id()[e];
    }
  }
  return CsrGraph(std::move(offsets), std::move(cols), std::move(probs), std::move(ids));
}

std::vector<vertex_id> invert_permutation(std::span<const vertex_id> perm) {
  constexpr auto unset = std::numeric_limits<vertex_id>::max();
  std::vector<vertex_id> inv(perm.size(), unset);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size() || inv[perm[i]] != unset) {
      throw GraphError("permutation is not a bijection (bad entry at position " + std::to_string(i) + ")");
    }
    inv[perm[i]] = static_cast<vertex_id>(i);
  }
  return inv;
}

PermutedGraph apply_permutation(const CsrGraph& g, std::span<const vertex_id> new_to_old) {
  const std::size_t n = g.num_vertices();
  if (new_to_old.size() != n) throw GraphError("permutation length differs from vertex count");
  std::vector<vertex_id> old_to_new = invert_permutation(new_to_old);

  std::vector<edge_index> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + g.out_degree(new_to_old[i]);

  const std::size_t m = g.num_edges();
  std::vector<vertex_id> cols(m);
  std::vector<float> probs(m);
  std::vector<edge_id> ids(m);
  std::vector<std::pair<vertex_id, edge_index>> row;
  for (std::size_t i = 0; i < n; ++i) {
    const vertex_id old = new_to_old[i];
    row.clear();
    for (edge_index e = g.edge_begin(old); e < g.edge_end(old); ++e) {
      row.emplace_back(old_to_new[g.col_indices()[e]], e);
    }
    std::sort(row.begin(), row.end());
    edge_index slot = offsets[i];
    for (auto [dst, e] : row) {
      cols[slot] = dst;
      probs[slot] = g.edge_prob()[e];
      ids[slot] = g.edge_global_id()[e];
      ++slot;
    }
  }
  return {CsrGraph(std::move(offsets), std::move(cols), std::move(probs), std::move(ids)),
          std::move(old_to_new)};
}

namespace {

constexpr std::array<char, 4> kMagic{'F', 'B', 'P', 'T'};

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::make_unsigned_t<std::conditional_t<std::is_floating_point_v<T>,
                                                    std::conditional_t<sizeof(T) == 4, std::int32_t, std::int64_t>, T>>;
  U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::make_unsigned_t<std::conditional_t<std::is_floating_point_v<T>,
                                                    std::conditional_t<sizeof(T) == 4, std::int32_t, std::int64_t>, T>>;
  std::array<unsigned char, sizeof(U)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw GraphError("truncated binary graph cache");
  }
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_binary(const CsrGraph& g, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCacheVersion);
  put_le<std::uint64_t>(out, g.num_vertices());
  put_le<std::uint64_t>(out, g.num_edges());
  for (auto x : g.row_offsets()) put_le<std::uint64_t>(out, x);
  for (auto x : g.col_indices()) put_le<std::uint32_t>(out, x);
  for (auto x : g.edge_prob()) put_le<float>(out, x);
  for (auto x : g.edge_global_id()) put_le<std::uint64_t>(out, x);
  if (!out) throw GraphError("failed writing binary graph cache");
}

CsrGraph read_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw GraphError("not an FBPT binary graph cache");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCacheVersion) throw GraphError("unsupported cache version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(in);
  const auto m = get_le<std::uint64_t>(in);
  std::vector<edge_index> offsets(n + 1);
  std::vector<vertex_id> cols(m);
  std::vector<float> probs(m);
  std::vector<edge_id> ids(m);
  for (auto& x : offsets) x = get_le<std::uint64_t>(in);
  for (auto& x : cols) x = get_le<std::uint32_t>(in);
  for (auto& x : probs) x = get_le<float>(in);
  for (auto& x : ids) x = get_le<std::uint64_t>(in);
  return CsrGraph(std::move(offsets), std::move(cols), std::move(probs), std::move(ids));
}

CsrGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open " + path);
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  if (binary) return read_binary(in);
  return load_edge_list(in);
}

}  // namespace fbpt
