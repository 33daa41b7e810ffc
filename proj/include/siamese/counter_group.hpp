#pragma once

// State machine for one aligned group of four base counters.
//
// A group is stored in a 32-bit word (four S-bit fields, slot i at bit 8*i for
// S = 8) plus a 4-bit state code. Pairs are (0,1) and (2,3). Each pair walks
//
//   independent -> lsb-shared -> merged (2S bits)
//
// and once both pairs are merged the two 2S-bit counters walk the same path
// one level up: lsb-shared at 2S bits, then merged into one 4S-bit counter,
// which saturates. That gives 3 x 3 pair-level codes plus two upper codes.
//
// Shared layout: a shared pair of W-bit fields keeps each counter's MSB in the
// upper W - K/2 bits of its own field. The K-bit shared LSB is split across the
// two fields: its low K/2 bits sit in the low bits of the even field, its high
// K/2 bits in the low bits of the odd field. A counter decodes as
// msb * 2^K + lsb.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>

#include "siamese/sketch_config.hpp"

namespace siamese {

enum class PairState : std::uint8_t { kIndependent = 0, kShared = 1, kMerged = 2 };

class GroupState {
 public:
  static constexpr std::uint8_t kShared16 = 9;
  static constexpr std::uint8_t kMerged32 = 10;
  static constexpr std::uint8_t kCount = 11;

  constexpr GroupState() = default;

  static constexpr GroupState of_pairs(PairState a, PairState b) noexcept {
    return GroupState(static_cast<std::uint8_t>(3 * static_cast<unsigned>(a) +
                                                static_cast<unsigned>(b)));
  }
  static constexpr GroupState shared16() noexcept { return GroupState(kShared16); }
  static constexpr GroupState merged32() noexcept { return GroupState(kMerged32); }
  // Throws FormatError for codes 11..15.
  static GroupState from_code(std::uint8_t code);
  static constexpr GroupState unchecked(unsigned code) noexcept {
    return GroupState(static_cast<std::uint8_t>(code));
  }

  constexpr std::uint8_t code() const noexcept { return code_; }
  constexpr bool pair_level() const noexcept { return code_ < kShared16; }

  // Pair state; both pairs read as merged once the group is past pair level.
  constexpr PairState pair(unsigned p) const noexcept {
    if (!pair_level()) return PairState::kMerged;
    return static_cast<PairState>(p == 0 ? code_ / 3 : code_ % 3);
  }

  constexpr GroupState with_pair(unsigned p, PairState s) const noexcept {
    return p == 0 ? of_pairs(s, pair(1)) : of_pairs(pair(0), s);
  }

  // Logical counters held by the group. A shared pair still counts two.
  constexpr unsigned logical_counters() const noexcept {
    if (code_ == kMerged32) return 1;
    if (code_ == kShared16) return 2;
    auto per_pair = [](PairState s) { return s == PairState::kMerged ? 1u : 2u; };
    return per_pair(pair(0)) + per_pair(pair(1));
  }

  // (pair A, pair B, upper level) progress; legal transitions never lower any entry.
  constexpr std::array<std::uint8_t, 3> progress() const noexcept {
    if (code_ == kMerged32) return {2, 2, 2};
    if (code_ == kShared16) return {2, 2, 1};
    return {static_cast<std::uint8_t>(pair(0)), static_cast<std::uint8_t>(pair(1)), 0};
  }

  std::string name() const;

  friend constexpr bool operator==(GroupState, GroupState) = default;

 private:
  explicit constexpr GroupState(std::uint8_t c) : code_(c) {}
  std::uint8_t code_ = 0;
};

// True when `to` is reachable from `from` without moving any component back.
constexpr bool never_regresses(GroupState from, GroupState to) noexcept {
  const auto a = from.progress();
  const auto b = to.progress();
  return a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2];
}

// A pair of counters sharing a K-bit LSB, in unpacked form.
struct SharedPair {
  std::uint64_t msb[2] = {0, 0};
  std::uint64_t lsb = 0;

  // One packet owned by counter `owner`. Every packet advances the shared LSB;
  // on wraparound only the owner's MSB is credited (winner-take-all).
  // Returns true on wraparound.
  bool add(unsigned owner, unsigned k) noexcept {
    if (++lsb == (std::uint64_t{1} << k)) {
      lsb = 0;
      ++msb[owner];
      return true;
    }
    return false;
  }

  std::uint64_t decode(unsigned owner, unsigned k) const noexcept {
    return (msb[owner] << k) + lsb;
  }
  // Total mass held by the pair: 2^K * (msb0 + msb1) + lsb.
  std::uint64_t joint(unsigned k) const noexcept { return ((msb[0] + msb[1]) << k) + lsb; }

  // Entering the shared state from two exact values: the shared LSB starts at
  // the larger of the two K-bit LSBs, each MSB is value / 2^K.
  static SharedPair from_values(std::uint64_t v0, std::uint64_t v1, unsigned k) noexcept {
    const std::uint64_t low = (std::uint64_t{1} << k) - 1;
    SharedPair p;
    p.msb[0] = v0 >> k;
    p.msb[1] = v1 >> k;
    p.lsb = std::max(v0 & low, v1 & low);
    return p;
  }
};

struct GroupParams {
  unsigned counter_bits = 8;  // S
  unsigned shared_bits = 4;   // K; 0 disables sharing
  MergeMode merge = MergeMode::kSum;

  static GroupParams from(const SketchConfig& cfg) noexcept {
    return {cfg.counter_bits, cfg.effective_shared_bits(), cfg.merge};
  }
};

namespace group {

constexpr std::uint32_t field_mask(unsigned width) noexcept {
  return width >= 32 ? 0xffffffffu : (std::uint32_t{1} << width) - 1;
}

constexpr std::uint32_t get_field(std::uint32_t word, unsigned offset, unsigned width) noexcept {
  return (word >> offset) & field_mask(width);
}

constexpr void set_field(std::uint32_t& word, unsigned offset, unsigned width,
                         std::uint32_t value) noexcept {
  const std::uint32_t m = field_mask(width) << offset;
  word = (word & ~m) | ((value << offset) & m);
}

constexpr std::uint64_t merge_values(std::uint64_t a, std::uint64_t b, MergeMode mode) noexcept {
  return mode == MergeMode::kSum ? a + b : std::max(a, b);
}

// Value a shared pair collapses to: its joint mass (sum) or the larger decoded counter (max).
inline std::uint64_t collapse(const SharedPair& p, unsigned k, MergeMode mode) noexcept {
  return mode == MergeMode::kSum ? p.joint(k) : std::max(p.decode(0, k), p.decode(1, k));
}

// Largest MSB a shared W-bit field can hold.
constexpr std::uint64_t msb_limit(unsigned width, unsigned k) noexcept {
  return (std::uint64_t{1} << (width - k / 2)) - 1;
}

// `base_unit` is the even unit of the pair at `level` (width S << level).
inline SharedPair load_shared(std::uint32_t word, unsigned level, unsigned base_unit,
                              const GroupParams& gp) noexcept {
  const unsigned w = gp.counter_bits << level;
  const unsigned half = gp.shared_bits / 2;
  const std::uint32_t hmask = field_mask(half);
  const std::uint32_t fe = get_field(word, base_unit * w, w);
  const std::uint32_t fo = get_field(word, (base_unit + 1) * w, w);
  SharedPair p;
  p.msb[0] = fe >> half;
  p.msb[1] = fo >> half;
  p.lsb = (fe & hmask) | ((fo & hmask) << half);
  return p;
}

inline void store_shared(std::uint32_t& word, unsigned level, unsigned base_unit,
                         const SharedPair& p, const GroupParams& gp) noexcept {
  const unsigned w = gp.counter_bits << level;
  const unsigned half = gp.shared_bits / 2;
  const std::uint32_t hmask = field_mask(half);
  const auto lsb = static_cast<std::uint32_t>(p.lsb);
  set_field(word, base_unit * w, w, static_cast<std::uint32_t>(p.msb[0] << half) | (lsb & hmask));
  set_field(word, (base_unit + 1) * w, w,
            static_cast<std::uint32_t>(p.msb[1] << half) | ((lsb >> half) & hmask));
}

inline GroupState advance(GroupState s, unsigned level, unsigned pair, PairState to) noexcept {
  if (level == 0) return s.with_pair(pair, to);
  return to == PairState::kShared ? GroupState::shared16() : GroupState::merged32();
}

// Unit `unit` at `level` is at capacity and receives one more packet; its peer
// is an exact (unshared) counter of the same width. The packet is applied
// first, then the pair enters the shared state from the bumped value; if the
// shared MSB cannot hold it (K = 0), the pair merges instead.
inline void overflow_unit(std::uint32_t& word, GroupState& state, unsigned level, unsigned unit,
                          const GroupParams& gp) noexcept {
  const unsigned w = gp.counter_bits << level;
  const unsigned k = gp.shared_bits;
  const std::uint64_t v = get_field(word, unit * w, w);
  const std::uint64_t peer = get_field(word, (unit ^ 1) * w, w);
  const unsigned pair = unit >> 1;
  if (k > 0) {
    const std::uint64_t bumped = v + 1;
    const SharedPair sp = (unit & 1) ? SharedPair::from_values(peer, bumped, k)
                                     : SharedPair::from_values(bumped, peer, k);
    const std::uint64_t limit = msb_limit(w, k);
    if (sp.msb[0] <= limit && sp.msb[1] <= limit) {
      store_shared(word, level, unit & ~1u, sp, gp);
      state = advance(state, level, pair, PairState::kShared);
      return;
    }
  }
  const std::uint64_t merged = merge_values(v, peer, gp.merge) + 1;
  set_field(word, pair * 2 * w, 2 * w, static_cast<std::uint32_t>(merged));
  state = advance(state, level, pair, PairState::kMerged);
}

inline void shared_increment(std::uint32_t& word, GroupState& state, unsigned level,
                             unsigned unit, const GroupParams& gp) noexcept {
  const unsigned w = gp.counter_bits << level;
  const unsigned k = gp.shared_bits;
  const unsigned base = unit & ~1u;
  const unsigned owner = unit & 1;
  SharedPair sp = load_shared(word, level, base, gp);
  if (sp.lsb + 1 == (std::uint64_t{1} << k) && sp.msb[owner] == msb_limit(w, k)) {
    // The owner's MSB would overflow: merge, then land this packet in the merged counter.
    const std::uint64_t merged = collapse(sp, k, gp.merge) + 1;
    set_field(word, (base >> 1) * 2 * w, 2 * w, static_cast<std::uint32_t>(merged));
    state = advance(state, level, base >> 1, PairState::kMerged);
    return;
  }
  sp.add(owner, k);
  store_shared(word, level, base, sp, gp);
}

// Brings pair `p` to the merged (2S-bit) state using the merge mode.
inline void force_merge_pair(std::uint32_t& word, GroupState& state, unsigned p,
                             const GroupParams& gp) noexcept {
  const unsigned s = gp.counter_bits;
  std::uint64_t merged = 0;
  switch (state.pair(p)) {
    case PairState::kMerged:
      return;
    case PairState::kIndependent:
      merged = merge_values(get_field(word, 2 * p * s, s), get_field(word, (2 * p + 1) * s, s),
                            gp.merge);
      break;
    case PairState::kShared:
      merged = collapse(load_shared(word, 0, 2 * p, gp), gp.shared_bits, gp.merge);
      break;
  }
  set_field(word, p * 2 * s, 2 * s, static_cast<std::uint32_t>(merged));
  state = state.with_pair(p, PairState::kMerged);
}

// One packet to base slot `slot` (0..3) of a late-merging group.
inline void increment(std::uint32_t& word, GroupState& state, unsigned slot,
                      const GroupParams& gp) noexcept {
  const unsigned s = gp.counter_bits;
  const std::uint8_t code = state.code();
  if (code == GroupState::kMerged32) {
    const std::uint32_t v = get_field(word, 0, 4 * s);
    if (v < field_mask(4 * s)) set_field(word, 0, 4 * s, v + 1);
    return;
  }
  if (code == GroupState::kShared16) {
    shared_increment(word, state, 1, slot >> 1, gp);
    return;
  }
  const unsigned p = slot >> 1;
  switch (state.pair(p)) {
    case PairState::kIndependent: {
      const std::uint32_t v = get_field(word, slot * s, s);
      if (v < field_mask(s)) {
        set_field(word, slot * s, s, v + 1);
      } else {
        overflow_unit(word, state, 0, slot, gp);
      }
      return;
    }
    case PairState::kShared:
      shared_increment(word, state, 0, slot, gp);
      return;
    case PairState::kMerged: {
      const std::uint32_t v = get_field(word, p * 2 * s, 2 * s);
      if (v < field_mask(2 * s)) {
        set_field(word, p * 2 * s, 2 * s, v + 1);
        return;
      }
      force_merge_pair(word, state, p ^ 1, gp);
      overflow_unit(word, state, 1, p, gp);
      return;
    }
  }
}

// Estimate held by the logical counter covering base slot `slot`.
inline std::uint64_t decode(std::uint32_t word, GroupState state, unsigned slot,
                            const GroupParams& gp) noexcept {
  const unsigned s = gp.counter_bits;
  const std::uint8_t code = state.code();
  if (code == GroupState::kMerged32) return get_field(word, 0, 4 * s);
  if (code == GroupState::kShared16)
    return load_shared(word, 1, 0, gp).decode(slot >> 1, gp.shared_bits);
  const unsigned p = slot >> 1;
  switch (state.pair(p)) {
    case PairState::kIndependent:
      return get_field(word, slot * s, s);
    case PairState::kShared:
      return load_shared(word, 0, 2 * p, gp).decode(slot & 1, gp.shared_bits);
    case PairState::kMerged:
      return get_field(word, p * 2 * s, 2 * s);
  }
  return 0;
}

// Packets accounted for by the whole group; a shared pair contributes its joint mass.
inline std::uint64_t mass(std::uint32_t word, GroupState state, const GroupParams& gp) noexcept {
  const unsigned s = gp.counter_bits;
  const std::uint8_t code = state.code();
  if (code == GroupState::kMerged32) return get_field(word, 0, 4 * s);
  if (code == GroupState::kShared16) return load_shared(word, 1, 0, gp).joint(gp.shared_bits);
  std::uint64_t total = 0;
  for (unsigned p = 0; p < 2; ++p) {
    switch (state.pair(p)) {
      case PairState::kIndependent:
        total += get_field(word, 2 * p * s, s) + get_field(word, (2 * p + 1) * s, s);
        break;
      case PairState::kShared:
        total += load_shared(word, 0, 2 * p, gp).joint(gp.shared_bits);
        break;
      case PairState::kMerged:
        total += get_field(word, p * 2 * s, 2 * s);
        break;
    }
  }
  return total;
}

}  // namespace group

// A single group with its own storage; convenient for replaying crafted
// packet sequences through the exact machine the sketch uses.
class CounterGroup {
 public:
  explicit CounterGroup(GroupParams params = {}) : params_(params) {}

  void increment(unsigned slot) noexcept { group::increment(word_, state_, slot, params_); }
  std::uint64_t value(unsigned slot) const noexcept {
    return group::decode(word_, state_, slot, params_);
  }
  std::uint64_t mass() const noexcept { return group::mass(word_, state_, params_); }
  GroupState state() const noexcept { return state_; }
  std::uint32_t word() const noexcept { return word_; }
  const GroupParams& params() const noexcept { return params_; }

 private:
  GroupParams params_;
  std::uint32_t word_ = 0;
  GroupState state_;
};

}  // namespace siamese
