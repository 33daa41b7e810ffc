#include "siamese/siamese_sketch.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "siamese/error.hpp"

namespace siamese {

SiameseSketch::SiameseSketch(SketchConfig cfg)
    : cfg_(std::move(cfg)), params_(GroupParams::from(cfg_)) {
  cfg_.validate();
  cfg_.with_seeds(0);
  groups_ = cfg_.groups_per_row();
  state_bytes_ = (groups_ + 1) / 2;
  hashers_.reserve(cfg_.rows);
  for (std::uint32_t r = 0; r < cfg_.rows; ++r) hashers_.emplace_back(cfg_.seeds[r], cfg_.width);
  words_.assign(std::size_t(cfg_.rows) * groups_, 0);
  states_.assign(std::size_t(cfg_.rows) * state_bytes_, 0);
}

std::uint64_t SiameseSketch::query(KeyView key) const noexcept {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t r = 0; r < hashers_.size(); ++r)
    best = std::min(best, value_at(r, hashers_[r].index_of(key)));
  return best;
}

CounterLocator SiameseSketch::find_counter(std::size_t row, KeyView key) const {
  if (row >= rows()) throw std::out_of_range("row out of range");
  return locate(row, hashers_[row].index_of(key));
}

CounterLocator SiameseSketch::locate(std::size_t row, std::size_t slot) const {
  if (row >= rows() || slot >= width()) throw std::out_of_range("slot out of range");
  const GroupState st = state_at(row * groups_ + slot / 4);
  const std::size_t base = slot & ~std::size_t{3};
  const std::size_t local = slot % 4;
  const std::size_t pair_first = base + (local & 2);
  const std::size_t peer_pair_first = base + ((local & 2) ^ 2);

  CounterLocator loc;
  loc.row = row;
  loc.slot = slot;
  if (st.code() == GroupState::kMerged32) {
    loc.level = 2;
    loc.counter = {base, 4};
  } else if (st.code() == GroupState::kShared16) {
    loc.level = 1;
    loc.shared = true;
    loc.counter = {pair_first, 2};
    loc.adjacent = SlotSpan{peer_pair_first, 2};
  } else {
    switch (st.pair(static_cast<unsigned>(local >> 1))) {
      case PairState::kIndependent:
      case PairState::kShared:
        loc.level = 0;
        loc.shared = st.pair(static_cast<unsigned>(local >> 1)) == PairState::kShared;
        loc.counter = {slot, 1};
        loc.adjacent = SlotSpan{slot ^ 1, 1};  // i + (-1)^(i mod 2)
        break;
      case PairState::kMerged:
        loc.level = 1;
        loc.counter = {pair_first, 2};
        loc.adjacent = SlotSpan{peer_pair_first, 2};
        break;
    }
  }
  loc.bits = cfg_.counter_bits << loc.level;
  return loc;
}

std::vector<std::size_t> SiameseSketch::counter_count() const {
  std::vector<std::size_t> counts(rows(), 0);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t g = 0; g < groups_; ++g) counts[r] += state_at(r * groups_ + g).logical_counters();
  return counts;
}

std::size_t SiameseSketch::total_counters() const {
  std::size_t total = 0;
  for (const auto c : counter_count()) total += c;
  return total;
}

GroupState SiameseSketch::group_state(std::size_t row, std::size_t group_index) const {
  if (row >= rows() || group_index >= groups_) throw std::out_of_range("group index out of range");
  return state_at(row * groups_ + group_index);
}

std::uint64_t SiameseSketch::row_mass(std::size_t row) const {
  if (row >= rows()) throw std::out_of_range("row out of range");
  std::uint64_t total = 0;
  for (std::size_t g = 0; g < groups_; ++g) {
    const std::size_t idx = row * groups_ + g;
    total += group::mass(words_[idx], state_at(idx), params_);
  }
  return total;
}

SiameseSketch SiameseSketch::restore(SketchConfig cfg, std::span<const std::uint32_t> words,
                                     std::span<const std::uint8_t> states) {
  SiameseSketch sketch(std::move(cfg));
  if (words.size() != sketch.words_.size() || states.size() != sketch.states_.size())
    throw FormatError("snapshot body size does not match its configuration");
  for (std::size_t i = 0; i < states.size(); ++i) {
    GroupState::from_code(states[i] & 0xf);
    const bool high_used = (i % sketch.state_bytes_) * 2 + 1 < sketch.groups_;
    if (high_used) {
      GroupState::from_code(states[i] >> 4);
    } else if ((states[i] >> 4) != 0) {
      throw FormatError("non-zero padding nibble in state array");
    }
  }
  std::copy(words.begin(), words.end(), sketch.words_.begin());
  std::copy(states.begin(), states.end(), sketch.states_.begin());
  return sketch;
}

}  // namespace siamese
