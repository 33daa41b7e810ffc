#include "siamese/count_min_sketch.hpp"

#include <algorithm>
#include <limits>

#include "siamese/error.hpp"

namespace siamese {

void CountMinConfig::validate() const {
  if (rows < 1) throw ConfigError("rows must be >= 1");
  if (width < 1) throw ConfigError("width must be >= 1");
  if (!seeds.empty() && seeds.size() != rows)
    throw ConfigError("expected " + std::to_string(rows) + " seeds, got " +
                      std::to_string(seeds.size()));
}

CountMinConfig& CountMinConfig::with_seeds(std::uint64_t master) {
  if (seeds.empty()) seeds = derive_seeds(master, rows);
  return *this;
}

CountMinSketch::CountMinSketch(CountMinConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  cfg_.with_seeds(0);
  hashers_.reserve(cfg_.rows);
  for (std::uint32_t r = 0; r < cfg_.rows; ++r) hashers_.emplace_back(cfg_.seeds[r], cfg_.width);
  counters_.assign(std::size_t(cfg_.rows) * cfg_.width, 0);
}

std::uint64_t CountMinSketch::query(KeyView key) const noexcept {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t r = 0; r < hashers_.size(); ++r)
    best = std::min<std::uint64_t>(best, counters_[r * cfg_.width + hashers_[r].index_of(key)]);
  return best;
}

CountMinSketch CountMinSketch::restore(CountMinConfig cfg,
                                       std::span<const std::uint32_t> counters) {
  CountMinSketch sketch(std::move(cfg));
  if (counters.size() != sketch.counters_.size())
    throw FormatError("snapshot body size does not match its configuration");
  std::copy(counters.begin(), counters.end(), sketch.counters_.begin());
  return sketch;
}

}  // namespace siamese
