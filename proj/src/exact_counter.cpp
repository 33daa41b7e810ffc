#include "siamese/exact_counter.hpp"

namespace siamese {

void ExactCounter::observe(KeyView key) {
  auto [it, inserted] = index_.try_emplace(as_string(key), keys_.size());
  if (inserted) {
    keys_.emplace_back(key);
    counts_.push_back(0);
  }
  ++counts_[it->second];
  ++total_;
}

std::uint64_t ExactCounter::truth(KeyView key) const {
  const auto it = index_.find(as_string(key));
  return it == index_.end() ? 0 : counts_[it->second];
}

std::vector<std::pair<FlowKey, std::uint64_t>> ExactCounter::flows() const {
  std::vector<std::pair<FlowKey, std::uint64_t>> out;
  out.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) out.emplace_back(keys_[i], counts_[i]);
  return out;
}

}  // namespace siamese
