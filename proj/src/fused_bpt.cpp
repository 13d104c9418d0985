#include "fbpt/fused_bpt.hpp"

#include <algorithm>

namespace fbpt {

ColorMask::ColorMask(std::size_t colors, std::span<const std::uint64_t> words)
    : colors_(colors), words_(words.begin(), words.end()) {
  if (words_.size() != mask_words(colors)) throw std::invalid_argument("mask word count mismatch");
}

void ColorMask::set(std::size_t c) {
  if (c >= colors_) throw std::out_of_range("color index out of range");
  words_[c / 64] |= std::uint64_t{1} << (c % 64);
}

std::size_t ColorMask::popcount() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool ColorMask::any() const noexcept {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::vector<std::uint32_t> ColorMask::members() const {
  std::vector<std::uint32_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    for (std::uint64_t bits = words_[w]; bits; bits &= bits - 1) {
      out.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
    }
  }
  return out;
}

std::size_t GroupSpec::active_colors() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(sources.begin(), sources.end(), [](vertex_id s) { return s != kInactiveSource; }));
}

void TraversalState::resize(std::size_t num_vertices, std::size_t colors) {
  current_ = MaskArray(num_vertices, colors);
  next_ = MaskArray(num_vertices, colors);
  visited_ = MaskArray(num_vertices, colors);
  queued_.assign(num_vertices, 0);
  queue_.clear();
  next_queue_.clear();
  touched_.clear();
  level_ = 0;
}

void TraversalState::reset() {
  for (vertex_id v : touched_) visited_.clear_row(v);
  for (vertex_id v : queue_) {
    current_.clear_row(v);
    queued_[v] = 0;
  }
  for (vertex_id v : next_queue_) {
    next_.clear_row(v);
    queued_[v] = 0;
  }
  queue_.clear();
  next_queue_.clear();
  touched_.clear();
  level_ = 0;
}

std::vector<std::vector<vertex_id>> TraversalState::members_by_color() const {
  std::vector<vertex_id> order(touched_.begin(), touched_.end());
  std::sort(order.begin(), order.end());
  std::vector<std::vector<vertex_id>> out(colors());
  const std::size_t stride = visited_.stride();
  for (vertex_id v : order) {
    const std::uint64_t* row = visited_.row(v);
    for (std::size_t w = 0; w < stride; ++w) {
      for (std::uint64_t bits = row[w]; bits; bits &= bits - 1) {
        out[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))].push_back(v);
      }
    }
  }
  return out;
}

FusedResult fused_traverse(const CsrGraph& gT, const GroupSpec& spec, std::uint64_t base_seed,
                           const TraversalOptions& options) {
  return fused_traverse_with(gT, spec, GroupCoinPolicy(base_seed, spec.group_id), options);
}

std::vector<RrrSet> collect_rrr_sets(const MaskArray& visited, const GroupSpec& spec) {
  std::vector<RrrSet> sets;
  std::vector<std::size_t> slot_of(spec.colors(), static_cast<std::size_t>(-1));
  for (std::size_t c = 0; c < spec.colors(); ++c) {
    if (spec.sources[c] == kInactiveSource) continue;
    slot_of[c] = sets.size();
    sets.push_back({spec.sources[c], spec.group_id, static_cast<std::uint32_t>(c), {}});
  }
  const std::size_t stride = visited.stride();
  for (std::size_t v = 0; v < visited.size(); ++v) {
    const std::uint64_t* row = visited.row(v);
    for (std::size_t w = 0; w < stride; ++w) {
      for (std::uint64_t bits = row[w]; bits; bits &= bits - 1) {
        const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        if (c < slot_of.size() && slot_of[c] != static_cast<std::size_t>(-1)) {
          sets[slot_of[c]].members.push_back(static_cast<vertex_id>(v));
        }
      }
    }
  }
  return sets;
}

}  // namespace fbpt
