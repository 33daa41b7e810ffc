#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "siamese/counter_group.hpp"
#include "siamese/flow_key.hpp"
#include "siamese/hashing.hpp"
#include "siamese/sketch_config.hpp"

namespace siamese {

// Contiguous run of base slots occupied by one logical counter.
struct SlotSpan {
  std::size_t first = 0;
  std::size_t slots = 1;
  friend bool operator==(const SlotSpan&, const SlotSpan&) = default;
};

// Where a key's estimate lives in one row: the hashed base slot, the logical
// counter enclosing it, and the same-size peer at that level (none at the top).
struct CounterLocator {
  std::size_t row = 0;
  std::size_t slot = 0;
  unsigned level = 0;  // 0: S bits, 1: 2S bits, 2: 4S bits
  unsigned bits = 8;
  bool shared = false;
  SlotSpan counter;
  std::optional<SlotSpan> adjacent;
};

// Count-Min-shaped sketch of d rows x w small counters that share K LSBs with
// their neighbour on overflow and merge only when the unshared MSB overflows.
//
// Single writer: encode calls must be serialized; concurrent queries are fine
// while no encode is running.
class SiameseSketch {
 public:
  explicit SiameseSketch(SketchConfig cfg);

  void encode(KeyView key) noexcept {
    for (std::size_t r = 0; r < hashers_.size(); ++r) increment_slot(r, hashers_[r].index_of(key));
  }

  // Minimum over rows of the decoded logical counter at the key's slot.
  std::uint64_t query(KeyView key) const noexcept;

  CounterLocator find_counter(std::size_t row, KeyView key) const;
  CounterLocator locate(std::size_t row, std::size_t slot) const;

  // Raw access by base slot, bypassing the hash.
  void increment_slot(std::size_t row, std::size_t slot) noexcept {
    const std::size_t g = row * groups_ + slot / 4;
    GroupState st = state_at(g);
    group::increment(words_[g], st, static_cast<unsigned>(slot % 4), params_);
    store_state(g, st);
  }
  std::uint64_t value_at(std::size_t row, std::size_t slot) const noexcept {
    const std::size_t g = row * groups_ + slot / 4;
    return group::decode(words_[g], state_at(g), static_cast<unsigned>(slot % 4), params_);
  }

  // Logical counters per row: independent and lsb-shared counters count one
  // each, a merged counter counts one.
  std::vector<std::size_t> counter_count() const;
  std::size_t total_counters() const;

  GroupState group_state(std::size_t row, std::size_t group_index) const;

  // Packets accounted for by one row (shared pairs contribute their joint mass).
  std::uint64_t row_mass(std::size_t row) const;

  const SketchConfig& config() const noexcept { return cfg_; }
  std::uint64_t memory_bits() const noexcept { return cfg_.memory_bits(); }
  std::size_t rows() const noexcept { return hashers_.size(); }
  std::size_t width() const noexcept { return cfg_.width; }

  // Raw storage for snapshots: one 32-bit word per group, and the packed
  // state nibbles (group 2i in the low nibble of byte i).
  std::span<const std::uint32_t> row_words(std::size_t row) const noexcept {
    return {words_.data() + row * groups_, groups_};
  }
  std::span<const std::uint8_t> row_states(std::size_t row) const noexcept {
    return {states_.data() + row * state_bytes_, state_bytes_};
  }
  // Inverse of the accessors above; validates every state code.
  static SiameseSketch restore(SketchConfig cfg, std::span<const std::uint32_t> words,
                               std::span<const std::uint8_t> states);

 private:
  GroupState state_at(std::size_t g) const noexcept {
    const std::size_t row = g / groups_;
    const std::size_t local = g % groups_;
    const std::uint8_t byte = states_[row * state_bytes_ + local / 2];
    // Codes are validated on restore, so this never sees 11..15.
    return GroupState::unchecked((local & 1) ? (byte >> 4) : (byte & 0xf));
  }
  void store_state(std::size_t g, GroupState s) noexcept {
    const std::size_t row = g / groups_;
    const std::size_t local = g % groups_;
    std::uint8_t& byte = states_[row * state_bytes_ + local / 2];
    if (local & 1) {
      byte = static_cast<std::uint8_t>((byte & 0x0f) | (s.code() << 4));
    } else {
      byte = static_cast<std::uint8_t>((byte & 0xf0) | s.code());
    }
  }

  SketchConfig cfg_;
  GroupParams params_;
  std::size_t groups_;
  std::size_t state_bytes_;
  std::vector<RowHasher> hashers_;
  std::vector<std::uint32_t> words_;
  std::vector<std::uint8_t> states_;
};

}  // namespace siamese
