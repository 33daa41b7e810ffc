#include "siamese/instant_merge_sketch.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "siamese/error.hpp"

namespace siamese {

InstantMergeSketch::InstantMergeSketch(SketchConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.lsb_sharing = false;
  cfg_.validate();
  cfg_.with_seeds(0);
  groups_ = cfg_.groups_per_row();
  state_bytes_ = (groups_ + 1) / 2;
  hashers_.reserve(cfg_.rows);
  for (std::uint32_t r = 0; r < cfg_.rows; ++r) hashers_.emplace_back(cfg_.seeds[r], cfg_.width);
  words_.assign(std::size_t(cfg_.rows) * groups_, 0);
  states_.assign(std::size_t(cfg_.rows) * state_bytes_, 0);
}

std::uint64_t InstantMergeSketch::query(KeyView key) const noexcept {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t r = 0; r < hashers_.size(); ++r)
    best = std::min(best, value_at(r, hashers_[r].index_of(key)));
  return best;
}

std::vector<std::size_t> InstantMergeSketch::counter_count() const {
  std::vector<std::size_t> counts(rows(), 0);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t g = 0; g < groups_; ++g) counts[r] += state_at(r * groups_ + g).logical_counters();
  return counts;
}

std::size_t InstantMergeSketch::total_counters() const {
  std::size_t total = 0;
  for (const auto c : counter_count()) total += c;
  return total;
}

GroupState InstantMergeSketch::group_state(std::size_t row, std::size_t group_index) const {
  if (row >= rows() || group_index >= groups_) throw std::out_of_range("group index out of range");
  return state_at(row * groups_ + group_index);
}

std::uint64_t InstantMergeSketch::row_mass(std::size_t row) const {
  if (row >= rows()) throw std::out_of_range("row out of range");
  const unsigned s = cfg_.counter_bits;
  std::uint64_t total = 0;
  for (std::size_t g = 0; g < groups_; ++g) {
    const std::size_t idx = row * groups_ + g;
    const GroupState st = state_at(idx);
    const std::uint32_t w = words_[idx];
    if (st.code() == GroupState::kMerged32) {
      total += group::get_field(w, 0, 4 * s);
      continue;
    }
    for (unsigned p = 0; p < 2; ++p) {
      if (st.pair(p) == PairState::kIndependent) {
        total += group::get_field(w, 2 * p * s, s) + group::get_field(w, (2 * p + 1) * s, s);
      } else {
        total += group::get_field(w, p * 2 * s, 2 * s);
      }
    }
  }
  return total;
}

namespace {

bool instant_code(std::uint8_t code) {
  if (code == GroupState::kMerged32) return true;
  if (code >= GroupState::kShared16) return false;
  const GroupState st = GroupState::unchecked(code);
  return st.pair(0) != PairState::kShared && st.pair(1) != PairState::kShared;
}

}  // namespace

InstantMergeSketch InstantMergeSketch::restore(SketchConfig cfg,
                                               std::span<const std::uint32_t> words,
                                               std::span<const std::uint8_t> states) {
  InstantMergeSketch sketch(std::move(cfg));
  if (words.size() != sketch.words_.size() || states.size() != sketch.states_.size())
    throw FormatError("snapshot body size does not match its configuration");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const bool high_used = (i % sketch.state_bytes_) * 2 + 1 < sketch.groups_;
    if (!instant_code(states[i] & 0xf) || (high_used && !instant_code(states[i] >> 4)) ||
        (!high_used && (states[i] >> 4) != 0))
      throw FormatError("illegal instant-merge state code in snapshot");
  }
  std::copy(words.begin(), words.end(), sketch.words_.begin());
  std::copy(states.begin(), states.end(), sketch.states_.begin());
  return sketch;
}

}  // namespace siamese
