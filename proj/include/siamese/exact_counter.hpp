#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "siamese/flow_key.hpp"

namespace siamese {

// Exact per-flow counts; the ground truth every metric is measured against.
// Flows are reported in first-seen order so downstream output is deterministic.
class ExactCounter {
 public:
  void observe(KeyView key);
  std::uint64_t truth(KeyView key) const;

  std::size_t distinct() const noexcept { return keys_.size(); }
  std::uint64_t total() const noexcept { return total_; }

  const std::vector<FlowKey>& keys() const noexcept { return keys_; }
  std::uint64_t count_at(std::size_t i) const noexcept { return counts_[i]; }

  // (key, count) pairs in first-seen order.
  std::vector<std::pair<FlowKey, std::uint64_t>> flows() const;

 private:
  static std::string as_string(KeyView key) {
    return {reinterpret_cast<const char*>(key.data()), key.size()};
  }

  std::unordered_map<std::string, std::size_t> index_;
  std::vector<FlowKey> keys_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

}  // namespace siamese
