#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "siamese/flow_key.hpp"
#include "siamese/trace.hpp"

namespace siamese {

struct ZipfConfig {
  double skew = 1.0;            // 0 gives a uniform trace
  std::uint64_t universe = 100000;
  std::uint64_t packets = 1000000;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

// 8-byte key of the flow at popularity rank `rank` (1 = most frequent).
FlowKey zipf_key(std::uint64_t rank);

// Inverse-CDF sampler over ranks 1..universe with P(r) proportional to r^-skew.
class ZipfSampler {
 public:
  ZipfSampler(double skew, std::uint64_t universe);

  // u in [0, 1)
  std::uint64_t rank(double u) const noexcept;
  double probability(std::uint64_t rank) const noexcept;
  std::uint64_t universe() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

Trace gen_zipf(const ZipfConfig& cfg);

enum class Interleave { kSequential, kRoundRobin };
std::string_view to_string(Interleave m) noexcept;
Interleave parse_interleave(std::string_view s);  // throws ConfigError

struct AttackPlan {
  std::uint64_t width = 0;             // attacker's estimate of the row width
  double fraction = 0.0;               // share of counters to saturate
  std::uint64_t target_counters = 0;   // round(fraction * width)
  double expected_flows = 0.0;         // expected draws to hit target_counters distinct counters
  std::uint64_t flows = 0;             // ceil(expected_flows)
  std::uint32_t packets_per_flow = 256;
  Interleave interleave = Interleave::kSequential;

  std::uint64_t packets() const noexcept { return flows * packets_per_flow; }
};

// Throws ConfigError unless width >= 1 and 0 <= fraction <= 1.
AttackPlan plan_attack(std::uint64_t width, double fraction, std::uint32_t packets_per_flow = 256,
                       Interleave interleave = Interleave::kSequential);

// plan.flows distinct uniformly random 8-byte keys, each sent packets_per_flow
// times. Sequential sends each flow as one burst; round-robin cycles through
// all flows once per round.
Trace gen_attack(const AttackPlan& plan, std::uint64_t seed);

enum class MixMode { kAppend, kPrepend, kRandomMerge };
std::string_view to_string(MixMode m) noexcept;
MixMode parse_mix_mode(std::string_view s);  // throws ConfigError

// Append: benign then attack. Prepend: attack then benign. Random merge: a
// uniformly random interleaving that keeps the order inside each stream.
// Throws FormatError when both streams are non-empty with different key lengths.
Trace mix_streams(const Trace& benign, const Trace& attack, MixMode mode, std::uint64_t seed);

}  // namespace siamese
