#include "siamese/bench.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace siamese {

namespace {

volatile std::uint64_t bench_sink = 0;

template <class Sketch>
double one_run(const Sketch& prototype, const Trace& trace, std::uint64_t& sink) {
  Sketch s = prototype;
  const auto start = std::chrono::steady_clock::now();
  for (const KeyView k : trace) s.encode(k);
  const auto stop = std::chrono::steady_clock::now();
  sink += s.query(trace[0]);
  const double secs = std::chrono::duration<double>(stop - start).count();
  return static_cast<double>(trace.size()) / secs / 1e6;
}

}  // namespace

BenchResult run_bench(Scheme scheme, const SchemeConfigs& cfg, const Trace& trace,
                      std::size_t runs) {
  if (runs == 0) throw std::invalid_argument("bench needs at least one run");
  if (trace.empty()) throw std::invalid_argument("bench needs a non-empty trace");
  BenchResult r;
  r.scheme = scheme;
  r.packets = trace.size();
  r.runs = runs;

  const AnySketch prototype = make_sketch(scheme, cfg);
  std::vector<double> mpps;
  mpps.reserve(runs);
  std::uint64_t sink = 0;
  std::visit(
      [&](const auto& proto) {
        one_run(proto, trace, sink);
        for (std::size_t i = 0; i < runs; ++i) mpps.push_back(one_run(proto, trace, sink));
      },
      prototype);
  bench_sink = sink;

  double sum = 0.0;
  for (const double v : mpps) {
    sum += v;
    r.best_mpps = std::max(r.best_mpps, v);
  }
  r.mean_mpps = sum / static_cast<double>(runs);
  double sq = 0.0;
  for (const double v : mpps) sq += (v - r.mean_mpps) * (v - r.mean_mpps);
  r.stddev_mpps = runs > 1 ? std::sqrt(sq / static_cast<double>(runs - 1)) : 0.0;
  return r;
}

}  // namespace siamese
