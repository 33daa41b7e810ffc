#include "siamese/hashing.hpp"

#include <cstring>
#include <stdexcept>

namespace siamese {

std::uint64_t hash_bytes(KeyView key, std::uint64_t seed) noexcept {
  constexpr std::uint64_t m = 0xc6a4a7935bd1e995ULL;
  constexpr int r = 47;
  const std::size_t len = key.size();
  std::uint64_t h = seed ^ (len * m);

  const std::uint8_t* data = key.data();
  const std::size_t blocks = len / 8;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::uint64_t k;
    std::memcpy(&k, data + 8 * i, 8);
    k *= m;
    k ^= k >> r;
    k *= m;
    h ^= k;
    h *= m;
  }

  const std::uint8_t* tail = data + 8 * blocks;
  switch (len & 7) {
    case 7: h ^= std::uint64_t(tail[6]) << 48; [[fallthrough]];
    case 6: h ^= std::uint64_t(tail[5]) << 40; [[fallthrough]];
    case 5: h ^= std::uint64_t(tail[4]) << 32; [[fallthrough]];
    case 4: h ^= std::uint64_t(tail[3]) << 24; [[fallthrough]];
    case 3: h ^= std::uint64_t(tail[2]) << 16; [[fallthrough]];
    case 2: h ^= std::uint64_t(tail[1]) << 8; [[fallthrough]];
    case 1:
      h ^= std::uint64_t(tail[0]);
      h *= m;
  }

  h ^= h >> r;
  h *= m;
  h ^= h >> r;
  return h;
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  std::uint64_t state = master;
  for (auto& s : seeds) {
    state = mix64(state);
    s = state;
  }
  return seeds;
}

RowHasher::RowHasher(std::uint64_t seed, std::size_t width) : seed_(seed), width_(width) {
  if (width == 0) throw std::invalid_argument("RowHasher width must be positive");
}

}  // namespace siamese
