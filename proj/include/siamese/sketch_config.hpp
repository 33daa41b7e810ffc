#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace siamese {

enum class MergeMode : std::uint8_t { kSum = 0, kMax = 1 };

std::string_view to_string(MergeMode m) noexcept;
MergeMode parse_merge_mode(std::string_view s);  // throws ConfigError

// Shape of a dynamic (8 -> 16 -> 32 bit) sketch. Base counters are grouped in
// aligned fours; pairs are (0,1) and (2,3) inside a group.
struct SketchConfig {
  std::uint32_t rows = 3;          // d
  std::uint32_t width = 4096;      // w base counters per row, multiple of 4
  std::uint32_t counter_bits = 8;  // S, base counter width; top level is 4*S bits
  std::uint32_t shared_bits = 4;   // K, shared LSB width, even, 0 < K < S
  MergeMode merge = MergeMode::kSum;
  bool lsb_sharing = true;  // false: overflow merges immediately (K treated as 0)
  std::vector<std::uint64_t> seeds;  // one per row; empty -> derived from seed 0

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  // Fills seeds from a master seed when none were given.
  SketchConfig& with_seeds(std::uint64_t master);

  unsigned effective_shared_bits() const noexcept { return lsb_sharing ? shared_bits : 0; }
  std::uint32_t groups_per_row() const noexcept { return width / 4; }

  // Counter bits plus one state bit per base counter (4 bits per group).
  std::uint64_t memory_bits() const noexcept {
    return std::uint64_t(rows) * width * (counter_bits + 1);
  }

  friend bool operator==(const SketchConfig&, const SketchConfig&) = default;
};

}  // namespace siamese
