#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "siamese/flow_key.hpp"

namespace siamese {

__extension__ using uint128 = unsigned __int128;

// Seeded 64-bit MurmurHash64A over the key bytes.
std::uint64_t hash_bytes(KeyView key, std::uint64_t seed) noexcept;

// splitmix64 finalizer; a bijection on 64-bit integers.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-row seeds derived deterministically from one master seed.
std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::size_t count);

// Maps a key to a slot in [0, width) for one sketch row. The 64-bit hash is
// reduced with a multiply-shift (high half of hash * width), so widths that
// are not powers of two carry no modulo bias.
class RowHasher {
 public:
  RowHasher(std::uint64_t seed, std::size_t width);

  std::size_t index_of(KeyView key) const noexcept {
    const auto h = hash_bytes(key, seed_);
    return static_cast<std::size_t>(
        (static_cast<uint128>(h) * width_) >> 64);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t width() const noexcept { return width_; }

 private:
  std::uint64_t seed_;
  std::uint64_t width_;
};

}  // namespace siamese
