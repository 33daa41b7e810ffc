#include "siamese/metrics.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace siamese {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.empty()) throw std::invalid_argument("metric over an empty flow set");
  if (a.size() != b.size()) throw std::invalid_argument("truth and estimate lengths differ");
}

}  // namespace

double metric_are(std::span<const double> truths, std::span<const double> estimates) {
  check_pair(truths, estimates);
  double sum = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] == 0.0) throw std::invalid_argument("relative error against a zero truth");
    sum += std::abs(truths[i] - estimates[i]) / truths[i];
  }
  return sum / static_cast<double>(truths.size());
}

double metric_rmse(std::span<const double> truths, std::span<const double> estimates) {
  check_pair(truths, estimates);
  double sum = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const double d = truths[i] - estimates[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(truths.size()));
}

DetectionScore score_detection(std::span<const FlowKey> detected, std::span<const FlowKey> truth) {
  const std::set<FlowKey> d(detected.begin(), detected.end());
  const std::set<FlowKey> t(truth.begin(), truth.end());
  std::size_t hits = 0;
  for (const auto& k : d) hits += t.count(k);
  DetectionScore s;
  if (!d.empty()) s.precision = static_cast<double>(hits) / static_cast<double>(d.size());
  if (!t.empty()) s.recall = static_cast<double>(hits) / static_cast<double>(t.size());
  if (s.precision + s.recall > 0)
    s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double metric_f1(std::span<const FlowKey> detected, std::span<const FlowKey> truth) {
  return score_detection(detected, truth).f1;
}

FlowSizeDistribution FlowSizeDistribution::from_sizes(std::span<const std::uint64_t> sizes) {
  FlowSizeDistribution fsd;
  for (const auto s : sizes) fsd.add(s);
  return fsd;
}

void FlowSizeDistribution::add(std::uint64_t size) {
  if (size >= counts_.size()) counts_.resize(size + 1, 0);
  ++counts_[size];
  ++flows_;
}

double metric_wmre(const FlowSizeDistribution& estimate, const FlowSizeDistribution& truth) {
  if (estimate.empty() && truth.empty())
    throw std::invalid_argument("WMRE of two empty distributions");
  const std::uint64_t z = std::max(estimate.largest(), truth.largest());
  double num = 0.0;
  double den = 0.0;
  for (std::uint64_t i = 0; i <= z; ++i) {
    const auto a = static_cast<double>(truth.at(i));
    const auto b = static_cast<double>(estimate.at(i));
    num += std::abs(a - b);
    den += (a + b) / 2;
  }
  return num / den;
}

double estimate_entropy(const FlowSizeDistribution& fsd) {
  if (fsd.empty()) throw std::invalid_argument("entropy of an empty distribution");
  const auto n = static_cast<double>(fsd.flows());
  double h = 0.0;
  const auto& c = fsd.counts();
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    const double p = static_cast<double>(c[i]) / n;
    h -= static_cast<double>(i) * p * std::log(p);
  }
  return h;
}

RelativeError metric_re(double estimate, double actual) {
  if (actual == 0.0) return {std::abs(estimate - actual), true};
  return {std::abs(1.0 - estimate / actual), false};
}

}  // namespace siamese
