#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "siamese/counter_group.hpp"
#include "siamese/flow_key.hpp"
#include "siamese/hashing.hpp"
#include "siamese/sketch_config.hpp"

namespace siamese {

namespace instant {

// Merge-on-overflow group machine: a full S-bit counter fuses with its peer
// immediately; a full 2S-bit counter fuses with the other pair (merging that
// pair first if needed). Uses the pair-level codes with no shared states.
inline void increment(std::uint32_t& word, GroupState& state, unsigned slot, unsigned s,
                      MergeMode mode) noexcept {
  using group::get_field;
  using group::set_field;
  using group::field_mask;
  if (state.code() == GroupState::kMerged32) {
    const std::uint32_t v = get_field(word, 0, 4 * s);
    if (v < field_mask(4 * s)) set_field(word, 0, 4 * s, v + 1);
    return;
  }
  const unsigned p = slot >> 1;
  if (state.pair(p) == PairState::kIndependent) {
    const std::uint32_t v = get_field(word, slot * s, s);
    if (v < field_mask(s)) {
      set_field(word, slot * s, s, v + 1);
      return;
    }
    const std::uint64_t merged =
        group::merge_values(v, get_field(word, (slot ^ 1) * s, s), mode) + 1;
    set_field(word, p * 2 * s, 2 * s, static_cast<std::uint32_t>(merged));
    state = state.with_pair(p, PairState::kMerged);
    return;
  }
  const std::uint32_t v = get_field(word, p * 2 * s, 2 * s);
  if (v < field_mask(2 * s)) {
    set_field(word, p * 2 * s, 2 * s, v + 1);
    return;
  }
  const unsigned q = p ^ 1;
  std::uint64_t other;
  if (state.pair(q) == PairState::kIndependent) {
    other = group::merge_values(get_field(word, 2 * q * s, s), get_field(word, (2 * q + 1) * s, s),
                                mode);
  } else {
    other = get_field(word, q * 2 * s, 2 * s);
  }
  const std::uint64_t merged = group::merge_values(v, other, mode) + 1;
  set_field(word, 0, 4 * s, static_cast<std::uint32_t>(merged));
  state = GroupState::merged32();
}

inline std::uint64_t decode(std::uint32_t word, GroupState state, unsigned slot,
                            unsigned s) noexcept {
  if (state.code() == GroupState::kMerged32) return group::get_field(word, 0, 4 * s);
  const unsigned p = slot >> 1;
  if (state.pair(p) == PairState::kIndependent) return group::get_field(word, slot * s, s);
  return group::get_field(word, p * 2 * s, 2 * s);
}

}  // namespace instant

// SALSA-style dynamic sketch: same storage and hashing as SiameseSketch but
// counters merge at the first overflow. The shared_bits field of the config
// is ignored.
class InstantMergeSketch {
 public:
  explicit InstantMergeSketch(SketchConfig cfg);

  void encode(KeyView key) noexcept {
    for (std::size_t r = 0; r < hashers_.size(); ++r) increment_slot(r, hashers_[r].index_of(key));
  }
  std::uint64_t query(KeyView key) const noexcept;

  void increment_slot(std::size_t row, std::size_t slot) noexcept {
    const std::size_t g = row * groups_ + slot / 4;
    GroupState st = state_at(g);
    instant::increment(words_[g], st, static_cast<unsigned>(slot % 4), cfg_.counter_bits,
                       cfg_.merge);
    store_state(g, st);
  }
  std::uint64_t value_at(std::size_t row, std::size_t slot) const noexcept {
    const std::size_t g = row * groups_ + slot / 4;
    return instant::decode(words_[g], state_at(g), static_cast<unsigned>(slot % 4),
                           cfg_.counter_bits);
  }

  std::vector<std::size_t> counter_count() const;
  std::size_t total_counters() const;
  GroupState group_state(std::size_t row, std::size_t group_index) const;
  std::uint64_t row_mass(std::size_t row) const;

  const SketchConfig& config() const noexcept { return cfg_; }
  std::uint64_t memory_bits() const noexcept { return cfg_.memory_bits(); }
  std::size_t rows() const noexcept { return hashers_.size(); }
  std::size_t width() const noexcept { return cfg_.width; }

  std::span<const std::uint32_t> row_words(std::size_t row) const noexcept {
    return {words_.data() + row * groups_, groups_};
  }
  std::span<const std::uint8_t> row_states(std::size_t row) const noexcept {
    return {states_.data() + row * state_bytes_, state_bytes_};
  }
  // Rejects codes outside the instant-merge subset.
  static InstantMergeSketch restore(SketchConfig cfg, std::span<const std::uint32_t> words,
                                    std::span<const std::uint8_t> states);

 private:
  GroupState state_at(std::size_t g) const noexcept {
    const std::size_t local = g % groups_;
    const std::uint8_t byte = states_[(g / groups_) * state_bytes_ + local / 2];
    return GroupState::unchecked((local & 1) ? (byte >> 4) : (byte & 0xf));
  }
  void store_state(std::size_t g, GroupState s) noexcept {
    const std::size_t local = g % groups_;
    std::uint8_t& byte = states_[(g / groups_) * state_bytes_ + local / 2];
    byte = (local & 1) ? static_cast<std::uint8_t>((byte & 0x0f) | (s.code() << 4))
                       : static_cast<std::uint8_t>((byte & 0xf0) | s.code());
  }

  SketchConfig cfg_;
  std::size_t groups_;
  std::size_t state_bytes_;
  std::vector<RowHasher> hashers_;
  std::vector<std::uint32_t> words_;
  std::vector<std::uint8_t> states_;
};

}  // namespace siamese
