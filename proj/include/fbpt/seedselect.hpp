#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fbpt/engine.hpp"
#include "fbpt/graph.hpp"

namespace fbpt {

struct SeedResult {
  std::vector<vertex_id> seeds;
  std::vector<std::uint64_t> covered;  // sets covered after each pick
  std::vector<std::uint64_t> gains;    // marginal gain of each pick
  double sigma_hat = 0.0;
  // Index of the first pick made with zero marginal gain (smallest unused id),
  // or seeds.size() when every pick covered something new.
  std::size_t first_zero_gain = 0;

  bool padded() const noexcept { return first_zero_gain < seeds.size(); }
};

// Lazy greedy max-k-cover over `sets` whose members lie in 0..num_vertices-1.
// Ties are broken toward the smallest vertex id.
SeedResult greedy_max_cover(std::span<const std::vector<vertex_id>> sets, std::size_t num_vertices,
                            std::int64_t k);
SeedResult greedy_max_cover(const RrrSetCollection& rrr, std::int64_t k);

// num_vertices * (sets hit by seeds) / number of sets.
double estimate_influence(std::span<const std::vector<vertex_id>> sets, std::size_t num_vertices,
                          std::span<const vertex_id> seeds);
double estimate_influence(const RrrSetCollection& rrr, std::span<const vertex_id> seeds);

}  // namespace fbpt
