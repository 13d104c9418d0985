#include "fbpt/seedselect.hpp"

#include <queue>
#include <stdexcept>

namespace fbpt {

namespace {

struct Candidate {
  std::uint64_t gain;
  vertex_id vertex;
  std::size_t round;  // pick index at which `gain` was computed

  // Max-heap on gain, then smallest id.
  bool operator<(const Candidate& o) const noexcept {
    return gain != o.gain ? gain < o.gain : vertex > o.vertex;
  }
};

template <typename MembersOf>
SeedResult greedy_impl(std::size_t num_sets, MembersOf&& members_of, std::size_t num_vertices, std::int64_t k) {
  if (k <= 0) throw std::invalid_argument("k must be positive");
  if (num_sets == 0) throw std::invalid_argument("no RRR sets to cover");
  if (static_cast<std::uint64_t>(k) > num_vertices) throw std::invalid_argument("k exceeds the vertex count");

  std::vector<std::vector<std::uint32_t>> containing(num_vertices);
  for (std::size_t s = 0; s < num_sets; ++s) {
    for (vertex_id v : members_of(s)) {
      if (v >= num_vertices) throw std::out_of_range("RRR member outside the vertex range");
      containing[v].push_back(static_cast<std::uint32_t>(s));
    }
  }

  std::priority_queue<Candidate> heap;
  for (vertex_id v = 0; v < num_vertices; ++v) {
    if (!containing[v].empty()) heap.push({containing[v].size(), v, 0});
  }

  std::vector<std::uint8_t> set_covered(num_sets, 0);
  std::vector<std::uint8_t> chosen(num_vertices, 0);
  SeedResult result;
  std::uint64_t covered = 0;
  const auto picks = static_cast<std::size_t>(k);

  while (result.seeds.size() < picks && !heap.empty()) {
    Candidate top = heap.top();
    heap.pop();
    const std::size_t round = result.seeds.size();
    if (top.round != round) {
      std::uint64_t gain = 0;
      for (auto s : containing[top.vertex]) gain += set_covered[s] ? 0 : 1;
      if (gain > 0) heap.push({gain, top.vertex, round});
      continue;
    }
    if (top.gain == 0) break;
    for (auto s : containing[top.vertex]) {
      if (!set_covered[s]) {
        set_covered[s] = 1;
        ++covered;
      }
    }
    chosen[top.vertex] = 1;
    result.seeds.push_back(top.vertex);
    result.gains.push_back(top.gain);
    result.covered.push_back(covered);
  }

  result.first_zero_gain = result.seeds.size();
  for (vertex_id v = 0; result.seeds.size() < picks; ++v) {
    if (chosen[v]) continue;
    chosen[v] = 1;
    result.seeds.push_back(v);
    result.gains.push_back(0);
    result.covered.push_back(covered);
  }
  result.sigma_hat = static_cast<double>(num_vertices) * static_cast<double>(covered) /
                     static_cast<double>(num_sets);
  return result;
}

template <typename MembersOf>
double influence_impl(std::size_t num_sets, MembersOf&& members_of, std::size_t num_vertices,
                      std::span<const vertex_id> seeds) {
  if (num_sets == 0) return 0.0;
  std::vector<std::uint8_t> is_seed(num_vertices, 0);
  for (vertex_id s : seeds) {
    if (s >= num_vertices) throw std::out_of_range("seed outside the vertex range");
    is_seed[s] = 1;
  }
  std::uint64_t hit = 0;
  for (std::size_t i = 0; i < num_sets; ++i) {
    for (vertex_id v : members_of(i)) {
      if (is_seed[v]) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(num_vertices) * static_cast<double>(hit) / static_cast<double>(num_sets);
}

}  // namespace

SeedResult greedy_max_cover(std::span<const std::vector<vertex_id>> sets, std::size_t num_vertices,
                            std::int64_t k) {
  return greedy_impl(sets.size(), [&](std::size_t i) -> const auto& { return sets[i]; }, num_vertices, k);
}

SeedResult greedy_max_cover(const RrrSetCollection& rrr, std::int64_t k) {
  return greedy_impl(
      rrr.sets.size(), [&](std::size_t i) -> const auto& { return rrr.sets[i].members; }, rrr.num_vertices, k);
}

double estimate_influence(std::span<const std::vector<vertex_id>> sets, std::size_t num_vertices,
                          std::span<const vertex_id> seeds) {
  return influence_impl(sets.size(), [&](std::size_t i) -> const auto& { return sets[i]; }, num_vertices, seeds);
}

double estimate_influence(const RrrSetCollection& rrr, std::span<const vertex_id> seeds) {
  return influence_impl(
      rrr.sets.size(), [&](std::size_t i) -> const auto& { return rrr.sets[i].members; }, rrr.num_vertices, seeds);
}

}  // namespace fbpt
