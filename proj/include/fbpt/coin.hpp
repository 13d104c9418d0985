#pragma once

#include <cstdint>

namespace fbpt {

// Stateless counter-based randomness. Every random decision in the project is
// a pure function of a key, so fused and unfused traversals that ask the same
// question get the same answer regardless of order or thread.

constexpr std::uint64_t fmix64(std::uint64_t k) noexcept {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

// Domain tags keep the different uses of the hash from sharing a key space.
enum class Domain : std::uint64_t {
  coin = 0x636f696e00000001ULL,
  source = 0x7372630000000002ULL,
  weight = 0x7767740000000003ULL,
  synth = 0x73796e0000000004ULL,
  order = 0x6f72640000000005ULL,
};

// Absorbs one word into a running state. fmix64 is a bijection, so two inputs
// that differ in a single word always produce different states.
constexpr std::uint64_t absorb(std::uint64_t state, std::uint64_t word) noexcept {
  return fmix64(state ^ word);
}

constexpr std::uint64_t hash_start(Domain d) noexcept {
  return fmix64(static_cast<std::uint64_t>(d));
}

template <typename... Words>
constexpr std::uint64_t hash_words(Domain d, Words... words) noexcept {
  std::uint64_t h = hash_start(d);
  ((h = absorb(h, static_cast<std::uint64_t>(words))), ...);
  return h;
}

// Top 53 bits as a double in [0, 1).
constexpr double to_unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Unbiased-enough reduction of a 64-bit hash onto [0, n).
__extension__ using uint128 = unsigned __int128;

inline std::uint64_t to_range(std::uint64_t h, std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>((static_cast<uint128>(h) * n) >> 64);
}

struct CoinKey {
  std::uint64_t base_seed = 0;
  std::uint64_t group_id = 0;
  std::uint64_t edge_global_id = 0;
  std::uint32_t color_id = 0;
};

constexpr std::uint64_t coin_bits(const CoinKey& k) noexcept {
  return hash_words(Domain::coin, k.base_seed, k.group_id, k.edge_global_id, k.color_id);
}

constexpr double coin_uniform(const CoinKey& k) noexcept { return to_unit(coin_bits(k)); }

// Edge kept iff the coin lands strictly below p; exact at p = 0 and p = 1.
constexpr bool edge_passes(const CoinKey& k, double p) noexcept { return coin_uniform(k) < p; }

// Coin source with the (seed, group) prefix pre-absorbed; the traversal
// kernels only absorb the edge and color words per consultation.
class GroupCoin {
 public:
  constexpr GroupCoin(std::uint64_t base_seed, std::uint64_t group_id) noexcept
      : prefix_(absorb(absorb(hash_start(Domain::coin), base_seed), group_id)) {}

  constexpr double uniform(std::uint64_t edge, std::uint32_t color) const noexcept {
    return to_unit(absorb(absorb(prefix_, edge), color));
  }
  constexpr bool passes(std::uint64_t edge, std::uint32_t color, double p) const noexcept {
    return uniform(edge, color) < p;
  }

 private:
  std::uint64_t prefix_;
};

}  // namespace fbpt
