#pragma once

// Measurement tasks over any sketch exposing query(KeyView). Sketches cannot
// enumerate their keys, so every task takes the key universe explicitly.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "siamese/error.hpp"
#include "siamese/exact_counter.hpp"
#include "siamese/flow_key.hpp"
#include "siamese/metrics.hpp"

namespace siamese {

template <class S>
concept FrequencySketch = requires(const S& s, KeyView k) {
  { s.query(k) } -> std::convertible_to<std::uint64_t>;
  s.config();
};

// Heavy-hitter / change threshold, either absolute or a fraction of the
// packets it is resolved against.
struct Threshold {
  double value = 1.0;
  bool fraction = false;

  // Smallest integer count that meets the threshold; at least 1.
  std::uint64_t resolve(std::uint64_t total_packets) const {
    if (!(value > 0.0)) throw ConfigError("threshold must be > 0");
    const double raw = fraction ? value * static_cast<double>(total_packets) : value;
    const double c = std::ceil(raw - 1e-9 * raw);
    return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
  }
};

template <FrequencySketch S>
std::vector<FlowKey> detect_heavy_hitters(const S& sketch, std::span<const FlowKey> universe,
                                          std::uint64_t phi) {
  std::vector<FlowKey> out;
  for (const auto& k : universe)
    if (sketch.query(k) >= phi) out.push_back(k);
  return out;
}

inline std::vector<FlowKey> true_heavy_hitters(const ExactCounter& oracle, std::uint64_t phi) {
  std::vector<FlowKey> out;
  for (std::size_t i = 0; i < oracle.distinct(); ++i)
    if (oracle.count_at(i) >= phi) out.push_back(oracle.keys()[i]);
  return out;
}

// Keys whose estimate moved by at least phi between two windows.
// Throws ConfigError when the sketches were built with different configurations.
template <FrequencySketch S>
std::vector<FlowKey> detect_changes(const S& before, const S& after,
                                    std::span<const FlowKey> universe, std::uint64_t phi) {
  if (!(before.config() == after.config()))
    throw ConfigError("change detection needs two sketches with the same configuration");
  std::vector<FlowKey> out;
  for (const auto& k : universe) {
    const std::uint64_t a = before.query(k);
    const std::uint64_t b = after.query(k);
    if ((a > b ? a - b : b - a) >= phi) out.push_back(k);
  }
  return out;
}

inline std::vector<FlowKey> true_changes(const ExactCounter& before, const ExactCounter& after,
                                         std::span<const FlowKey> universe, std::uint64_t phi) {
  std::vector<FlowKey> out;
  for (const auto& k : universe) {
    const std::uint64_t a = before.truth(k);
    const std::uint64_t b = after.truth(k);
    if ((a > b ? a - b : b - a) >= phi) out.push_back(k);
  }
  return out;
}

template <FrequencySketch S>
FlowSizeDistribution estimate_fsd(const S& sketch, std::span<const FlowKey> universe) {
  FlowSizeDistribution fsd;
  for (const auto& k : universe) fsd.add(sketch.query(k));
  return fsd;
}

inline FlowSizeDistribution true_fsd(const ExactCounter& oracle) {
  FlowSizeDistribution fsd;
  for (std::size_t i = 0; i < oracle.distinct(); ++i) fsd.add(oracle.count_at(i));
  return fsd;
}

}  // namespace siamese
