#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "fbpt/coin.hpp"
#include "fbpt/graph.hpp"
#include "fbpt/metrics.hpp"

namespace fbpt {

inline constexpr vertex_id kInactiveSource = std::numeric_limits<vertex_id>::max();

constexpr std::size_t mask_words(std::size_t colors) noexcept { return (colors + 63) / 64; }

// Fixed-width set of colors, padded to whole 64-bit words. Bits at or beyond
// `colors()` are always zero.
class ColorMask {
 public:
  ColorMask() = default;
  explicit ColorMask(std::size_t colors) : colors_(colors), words_(mask_words(colors), 0) {}
  ColorMask(std::size_t colors, std::span<const std::uint64_t> words);

  std::size_t colors() const noexcept { return colors_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool test(std::size_t c) const noexcept { return (words_[c / 64] >> (c % 64)) & 1U; }
  void set(std::size_t c);
  std::size_t popcount() const noexcept;
  bool any() const noexcept;
  std::vector<std::uint32_t> members() const;

  bool operator==(const ColorMask&) const = default;

 private:
  std::size_t colors_ = 0;
  std::vector<std::uint64_t> words_;
};

// n masks stored contiguously, `words_per_mask` words each.
class MaskArray {
 public:
  MaskArray() = default;
  MaskArray(std::size_t n, std::size_t colors)
      : colors_(colors), stride_(mask_words(colors)), words_(n * stride_, 0) {}

  std::size_t size() const noexcept { return stride_ ? words_.size() / stride_ : 0; }
  std::size_t colors() const noexcept { return colors_; }
  std::size_t stride() const noexcept { return stride_; }

  std::uint64_t* row(std::size_t v) noexcept { return words_.data() + v * stride_; }
  const std::uint64_t* row(std::size_t v) const noexcept { return words_.data() + v * stride_; }

  bool test(std::size_t v, std::size_t c) const noexcept { return (row(v)[c / 64] >> (c % 64)) & 1U; }
  bool any(std::size_t v) const noexcept {
    for (std::size_t w = 0; w < stride_; ++w) {
      if (row(v)[w]) return true;
    }
    return false;
  }
  std::size_t popcount(std::size_t v) const noexcept {
    std::size_t total = 0;
    for (std::size_t w = 0; w < stride_; ++w) total += static_cast<std::size_t>(std::popcount(row(v)[w]));
    return total;
  }
  ColorMask mask(std::size_t v) const { return ColorMask(colors_, {row(v), stride_}); }
  void clear_row(std::size_t v) noexcept {
    for (std::size_t w = 0; w < stride_; ++w) row(v)[w] = 0;
  }

 private:
  std::size_t colors_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

// One traversal group: color c starts at sources[c]. Duplicated sources are
// allowed; kInactiveSource marks a padding color that never runs.
struct GroupSpec {
  std::uint64_t group_id = 0;
  std::vector<vertex_id> sources;

  std::size_t colors() const noexcept { return sources.size(); }
  std::size_t active_colors() const noexcept;
};

struct RrrSet {
  vertex_id origin = 0;
  std::uint64_t group_id = 0;
  std::uint32_t color_id = 0;
  std::vector<vertex_id> members;  // ascending, contains origin

  bool operator==(const RrrSet&) const = default;
};

// Coin policies consulted by the kernel as passes(color_slot, edge_global_id, p).

// Keys slot s by (seed, group_id, edge, color_offset + s).
class GroupCoinPolicy {
 public:
  GroupCoinPolicy(std::uint64_t base_seed, std::uint64_t group_id, std::uint32_t color_offset = 0)
      : coin_(base_seed, group_id), offset_(color_offset) {}
  bool passes(std::uint32_t slot, edge_id e, double p) const noexcept {
    return coin_.passes(e, offset_ + slot, p);
  }

 private:
  GroupCoin coin_;
  std::uint32_t offset_;
};

// Keys slot i by an arbitrary (group, color) pair, so a batch of consecutive
// sample indices can straddle group boundaries without changing any coin.
class SlotCoinPolicy {
 public:
  struct Slot {
    GroupCoin coin;
    std::uint32_t color;
  };
  explicit SlotCoinPolicy(std::vector<Slot> slots) : slots_(std::move(slots)) {}
  bool passes(std::uint32_t slot, edge_id e, double p) const noexcept {
    return slots_[slot].coin.passes(e, slots_[slot].color, p);
  }

 private:
  std::vector<Slot> slots_;
};

class TraversalState;

struct TraversalOptions {
  // Called after initialization (level 0) and after each level with the
  // frontier that the next level will process.
  std::function<void(std::uint32_t level, const TraversalState&)> on_level;
  std::vector<OccupancyEvent>* event_log = nullptr;
};

// Per-worker scratch for level-synchronous fused traversals. Reusable across
// groups; never shared between threads.
class TraversalState {
 public:
  TraversalState() = default;
  TraversalState(std::size_t num_vertices, std::size_t colors) { resize(num_vertices, colors); }

  void resize(std::size_t num_vertices, std::size_t colors);

  std::size_t num_vertices() const noexcept { return visited_.size(); }
  std::size_t colors() const noexcept { return visited_.colors(); }

  const MaskArray& frontier() const noexcept { return current_; }
  const MaskArray& visited() const noexcept { return visited_; }
  std::span<const vertex_id> queue() const noexcept { return queue_; }
  std::uint32_t level() const noexcept { return level_; }

  // Vertices with a nonzero visited mask, in first-visit order.
  std::span<const vertex_id> touched() const noexcept { return touched_; }

  template <typename Coin>
  RunMetrics run(const CsrGraph& gT, std::span<const vertex_id> sources, const Coin& coin,
                 const TraversalOptions& options = {});

  // Members per color, ascending.
  std::vector<std::vector<vertex_id>> members_by_color() const;

 private:
  void reset();

  MaskArray current_;
  MaskArray next_;
  MaskArray visited_;
  std::vector<vertex_id> queue_;
  std::vector<vertex_id> next_queue_;
  std::vector<std::uint8_t> queued_;
  std::vector<vertex_id> touched_;
  std::uint32_t level_ = 0;
};

template <typename Coin>
RunMetrics TraversalState::run(const CsrGraph& gT, std::span<const vertex_id> sources, const Coin& coin,
                               const TraversalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (gT.num_vertices() != num_vertices() || sources.size() != colors()) {
    resize(gT.num_vertices(), sources.size());
  } else {
    reset();
  }
  const std::size_t stride = visited_.stride();
  const auto offsets = gT.row_offsets();
  const auto cols = gT.col_indices();
  const auto probs = gT.edge_prob();
  const auto ids = gT.edge_global_id();

  std::uint32_t active = 0;
  for (std::size_t c = 0; c < sources.size(); ++c) {
    const vertex_id s = sources[c];
    if (s == kInactiveSource) continue;
    if (s >= gT.num_vertices()) {
      throw GraphError("source " + std::to_string(s) + " out of range for color " + std::to_string(c));
    }
    ++active;
    current_.row(s)[c / 64] |= std::uint64_t{1} << (c % 64);
    if (!queued_[s]) {
      queued_[s] = 1;
      queue_.push_back(s);
    }
  }
  for (vertex_id v : queue_) queued_[v] = 0;

  RunMetrics metrics;
  metrics.traversals = 1;
  level_ = 0;
  if (options.on_level) options.on_level(0, *this);

  while (!queue_.empty()) {
    // Mark the whole level visited before expanding it, so every edge check
    // below sees the same visited state regardless of queue order.
    for (vertex_id v : queue_) {
      std::uint64_t* fr = current_.row(v);
      std::uint64_t* vis = visited_.row(v);
      bool was_touched = false;
      std::uint32_t present = 0;
      for (std::size_t w = 0; w < stride; ++w) {
        was_touched |= vis[w] != 0;
        fr[w] &= ~vis[w];
        vis[w] |= fr[w];
        present += static_cast<std::uint32_t>(std::popcount(fr[w]));
      }
      ++metrics.vertex_pops;
      if (present == 0) continue;
      if (!was_touched) touched_.push_back(v);
      metrics.record_event(level_, present, active);
      if (options.event_log) options.event_log->push_back({level_, v, present, active});
    }

    for (vertex_id v : queue_) {
      const std::uint64_t* fr = current_.row(v);
      for (edge_index e = offsets[v]; e < offsets[v + 1]; ++e) {
        const vertex_id u = cols[e];
        const std::uint64_t* vis_u = visited_.row(u);
        std::uint64_t* next_u = next_.row(u);
        const double p = probs[e];
        const edge_id id = ids[e];
        bool consulted = false;
        bool gained = false;
        for (std::size_t w = 0; w < stride; ++w) {
          std::uint64_t candidates = fr[w] & ~vis_u[w];
          if (!candidates) continue;
          consulted = true;
          metrics.edge_bit_evaluations += static_cast<std::uint64_t>(std::popcount(candidates));
          std::uint64_t kept = 0;
          if (p >= 1.0) {
            kept = candidates;
          } else if (p > 0.0) {
            while (candidates) {
              const int bit = std::countr_zero(candidates);
              candidates &= candidates - 1;
              const auto slot = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(bit));
              if (coin.passes(slot, id, p)) kept |= std::uint64_t{1} << bit;
            }
          }
          if (kept) {
            next_u[w] |= kept;
            gained = true;
          }
        }
        if (consulted) ++metrics.edge_evaluations;
        if (gained && !queued_[u]) {
          queued_[u] = 1;
          next_queue_.push_back(u);
        }
      }
    }

    for (vertex_id v : queue_) current_.clear_row(v);
    std::swap(current_, next_);
    std::swap(queue_, next_queue_);
    next_queue_.clear();
    for (vertex_id v : queue_) queued_[v] = 0;
    ++level_;
    ++metrics.levels;
    if (options.on_level) options.on_level(level_, *this);
  }
  metrics.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return metrics;
}

struct FusedResult {
  MaskArray visited;
  RunMetrics metrics;
};

// Level-synchronous fused traversal of all colors in `spec` over the transpose
// graph, with coins keyed by (base_seed, spec.group_id, edge, color).
FusedResult fused_traverse(const CsrGraph& gT, const GroupSpec& spec, std::uint64_t base_seed,
                           const TraversalOptions& options = {});

// Same traversal with a caller-supplied coin policy.
template <typename Coin>
FusedResult fused_traverse_with(const CsrGraph& gT, const GroupSpec& spec, const Coin& coin,
                                const TraversalOptions& options = {}) {
  TraversalState state(gT.num_vertices(), spec.colors());
  RunMetrics metrics = state.run(gT, spec.sources, coin, options);
  return {state.visited(), std::move(metrics)};
}

struct UnfusedResult {
  std::vector<vertex_id> visited;  // ascending
  RunMetrics metrics;
};

// Single-color BFS querying the same coin keys as the fused kernel.
UnfusedResult unfused_traverse(const CsrGraph& gT, vertex_id source, std::uint64_t group_id,
                               std::uint32_t color_id, std::uint64_t base_seed);

// RRR sets for every active color of `spec`, in color order.
std::vector<RrrSet> collect_rrr_sets(const MaskArray& visited, const GroupSpec& spec);

}  // namespace fbpt
