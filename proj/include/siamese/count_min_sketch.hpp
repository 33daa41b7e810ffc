#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "siamese/flow_key.hpp"
#include "siamese/hashing.hpp"

namespace siamese {

struct CountMinConfig {
  std::uint32_t rows = 3;
  std::uint32_t width = 1152;  // 32-bit counters per row
  std::vector<std::uint64_t> seeds;

  void validate() const;
  CountMinConfig& with_seeds(std::uint64_t master);
  std::uint64_t memory_bits() const noexcept { return std::uint64_t(rows) * width * 32; }

  friend bool operator==(const CountMinConfig&, const CountMinConfig&) = default;
};

// Plain Count-Min with saturating 32-bit counters.
class CountMinSketch {
 public:
  explicit CountMinSketch(CountMinConfig cfg);

  void encode(KeyView key) noexcept {
    for (std::size_t r = 0; r < hashers_.size(); ++r) {
      std::uint32_t& c = counters_[r * cfg_.width + hashers_[r].index_of(key)];
      if (c != 0xffffffffu) ++c;
    }
  }
  std::uint64_t query(KeyView key) const noexcept;

  std::vector<std::size_t> counter_count() const {
    return std::vector<std::size_t>(cfg_.rows, cfg_.width);
  }
  std::size_t total_counters() const noexcept { return std::size_t(cfg_.rows) * cfg_.width; }

  const CountMinConfig& config() const noexcept { return cfg_; }
  std::uint64_t memory_bits() const noexcept { return cfg_.memory_bits(); }
  std::size_t rows() const noexcept { return cfg_.rows; }
  std::size_t width() const noexcept { return cfg_.width; }

  std::span<const std::uint32_t> row_counters(std::size_t row) const noexcept {
    return {counters_.data() + row * cfg_.width, cfg_.width};
  }
  static CountMinSketch restore(CountMinConfig cfg, std::span<const std::uint32_t> counters);

 private:
  CountMinConfig cfg_;
  std::vector<RowHasher> hashers_;
  std::vector<std::uint32_t> counters_;
};

}  // namespace siamese
