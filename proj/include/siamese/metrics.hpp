#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "siamese/flow_key.hpp"

namespace siamese {

// Mean of |truth - estimate| / truth. Throws std::invalid_argument on empty
// or mismatched input or a zero truth.
double metric_are(std::span<const double> truths, std::span<const double> estimates);
// Root of the mean squared error. Throws std::invalid_argument on empty or mismatched input.
double metric_rmse(std::span<const double> truths, std::span<const double> estimates);

struct DetectionScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};
// Set comparison; duplicates are ignored. An empty side gives precision or
// recall 0 unless both are empty, in which case every score is 0.
DetectionScore score_detection(std::span<const FlowKey> detected, std::span<const FlowKey> truth);
double metric_f1(std::span<const FlowKey> detected, std::span<const FlowKey> truth);

// Flows per size. Index i holds the number of flows of size i; a size-0 bucket
// only appears when an estimate reads 0.
class FlowSizeDistribution {
 public:
  FlowSizeDistribution() = default;
  static FlowSizeDistribution from_sizes(std::span<const std::uint64_t> sizes);

  void add(std::uint64_t size);
  std::uint64_t at(std::uint64_t size) const noexcept {
    return size < counts_.size() ? counts_[size] : 0;
  }
  std::uint64_t largest() const noexcept { return counts_.empty() ? 0 : counts_.size() - 1; }
  std::uint64_t flows() const noexcept { return flows_; }
  bool empty() const noexcept { return flows_ == 0; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  friend bool operator==(const FlowSizeDistribution&, const FlowSizeDistribution&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t flows_ = 0;
};

// sum |n_i - est_i| / sum (n_i + est_i) / 2 over every size either side holds.
// Throws std::invalid_argument when both distributions are empty.
double metric_wmre(const FlowSizeDistribution& estimate, const FlowSizeDistribution& truth);

// -sum_i i * (n_i / N) * ln(n_i / N), N = number of flows. Throws
// std::invalid_argument on an empty distribution.
double estimate_entropy(const FlowSizeDistribution& fsd);

struct RelativeError {
  double value = 0.0;
  bool absolute = false;  // actual was 0, value is |estimate - actual|
};
RelativeError metric_re(double estimate, double actual);

}  // namespace siamese
