#pragma once

#include <cstddef>
#include <cstdint>

#include "siamese/experiment.hpp"

namespace siamese {

struct BenchResult {
  Scheme scheme = Scheme::kSiamese;
  std::uint64_t packets = 0;  // per run
  std::size_t runs = 0;
  double mean_mpps = 0.0;
  double stddev_mpps = 0.0;
  double best_mpps = 0.0;
};

// Encodes the in-memory trace into a fresh sketch `runs` times after one
// untimed warm-up pass and reports millions of packets per second.
BenchResult run_bench(Scheme scheme, const SchemeConfigs& cfg, const Trace& trace,
                      std::size_t runs = 50);

}  // namespace siamese
