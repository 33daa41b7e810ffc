#include "siamese/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>

#include "siamese/analysis.hpp"
#include "siamese/error.hpp"
#include "siamese/hashing.hpp"

namespace siamese {

namespace {

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [0, n) by multiply-shift; identical across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<uint128>(rng()) * n) >> 64);
}

}  // namespace

void ZipfConfig::validate() const {
  if (!(skew >= 0.0) || !std::isfinite(skew)) throw ConfigError("zipf skew must be >= 0");
  if (universe == 0) throw ConfigError("zipf universe must be >= 1");
}

FlowKey zipf_key(std::uint64_t rank) { return FlowKey::from_u64(mix64(rank)); }

ZipfSampler::ZipfSampler(double skew, std::uint64_t universe) {
  if (!(skew >= 0.0) || !std::isfinite(skew)) throw ConfigError("zipf skew must be >= 0");
  if (universe == 0) throw ConfigError("zipf universe must be >= 1");
  cdf_.resize(universe);
  // Accumulate from the tail so small weights are not swamped.
  std::vector<double> weight(universe);
  for (std::uint64_t r = 1; r <= universe; ++r)
    weight[r - 1] = std::pow(static_cast<double>(r), -skew);
  double total = 0.0;
  for (auto it = weight.rbegin(); it != weight.rend(); ++it) total += *it;
  double acc = 0.0;
  for (std::uint64_t i = 0; i < universe; ++i) {
    acc += weight[i];
    cdf_[i] = acc / total;
  }
  cdf_.back() = 1.0;
}

std::uint64_t ZipfSampler::rank(double u) const noexcept {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                         cdf_.size() - 1);
  return idx + 1;
}

double ZipfSampler::probability(std::uint64_t rank) const noexcept {
  if (rank == 0 || rank > cdf_.size()) return 0.0;
  return rank == 1 ? cdf_[0] : cdf_[rank - 1] - cdf_[rank - 2];
}

Trace gen_zipf(const ZipfConfig& cfg) {
  cfg.validate();
  const ZipfSampler sampler(cfg.skew, cfg.universe);
  std::vector<FlowKey> keys;
  keys.reserve(cfg.universe);
  for (std::uint64_t r = 1; r <= cfg.universe; ++r) keys.push_back(zipf_key(r));

  std::mt19937_64 rng(cfg.seed);
  Trace trace(8);
  trace.reserve(cfg.packets);
  for (std::uint64_t i = 0; i < cfg.packets; ++i)
    trace.push_back(keys[sampler.rank(unit_double(rng)) - 1]);
  return trace;
}

std::string_view to_string(Interleave m) noexcept {
  return m == Interleave::kSequential ? "sequential" : "round-robin";
}

Interleave parse_interleave(std::string_view s) {
  if (s == "sequential") return Interleave::kSequential;
  if (s == "round-robin") return Interleave::kRoundRobin;
  throw ConfigError("unknown interleave '" + std::string(s) + "' (sequential|round-robin)");
}

AttackPlan plan_attack(std::uint64_t width, double fraction, std::uint32_t packets_per_flow,
                       Interleave interleave) {
  if (width == 0) throw ConfigError("attack width must be >= 1");
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("attack fraction must be in [0, 1]");
  AttackPlan plan;
  plan.width = width;
  plan.fraction = fraction;
  plan.target_counters =
      std::min<std::uint64_t>(width, static_cast<std::uint64_t>(std::llround(fraction * width)));
  plan.expected_flows = coupon_expect(width, plan.target_counters);
  plan.flows = static_cast<std::uint64_t>(std::ceil(plan.expected_flows - 1e-9));
  plan.packets_per_flow = packets_per_flow;
  plan.interleave = interleave;
  return plan;
}

Trace gen_attack(const AttackPlan& plan, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> seen;
  std::vector<FlowKey> keys;
  keys.reserve(plan.flows);
  while (keys.size() < plan.flows) {
    const std::uint64_t v = rng();
    if (seen.insert(v).second) keys.push_back(FlowKey::from_u64(v));
  }

  Trace trace(8);
  trace.reserve(plan.packets());
  if (plan.interleave == Interleave::kSequential) {
    for (const auto& k : keys)
      for (std::uint32_t j = 0; j < plan.packets_per_flow; ++j) trace.push_back(k);
  } else {
    for (std::uint32_t j = 0; j < plan.packets_per_flow; ++j)
      for (const auto& k : keys) trace.push_back(k);
  }
  return trace;
}

std::string_view to_string(MixMode m) noexcept {
  switch (m) {
    case MixMode::kAppend: return "append";
    case MixMode::kPrepend: return "prepend";
    case MixMode::kRandomMerge: return "random-merge";
  }
  return "?";
}

MixMode parse_mix_mode(std::string_view s) {
  if (s == "append") return MixMode::kAppend;
  if (s == "prepend") return MixMode::kPrepend;
  if (s == "random-merge") return MixMode::kRandomMerge;
  throw ConfigError("unknown mix mode '" + std::string(s) + "' (append|prepend|random-merge)");
}

Trace mix_streams(const Trace& benign, const Trace& attack, MixMode mode, std::uint64_t seed) {
  if (attack.empty()) return benign;
  if (benign.empty()) return attack;
  if (benign.key_len() != attack.key_len())
    throw FormatError("cannot mix traces with different key lengths");

  Trace out(benign.key_len());
  out.reserve(benign.size() + attack.size());
  switch (mode) {
    case MixMode::kAppend:
      for (const KeyView k : benign) out.push_back(k);
      for (const KeyView k : attack) out.push_back(k);
      break;
    case MixMode::kPrepend:
      for (const KeyView k : attack) out.push_back(k);
      for (const KeyView k : benign) out.push_back(k);
      break;
    case MixMode::kRandomMerge: {
      // Draw the next packet from a stream with probability proportional to
      // what it has left; every interleaving is equally likely.
      std::mt19937_64 rng(seed);
      std::size_t bi = 0, ai = 0;
      while (bi < benign.size() || ai < attack.size()) {
        const std::uint64_t left_b = benign.size() - bi;
        const std::uint64_t left = left_b + (attack.size() - ai);
        if (bounded(rng, left) < left_b) {
          out.push_back(benign[bi++]);
        } else {
          out.push_back(attack[ai++]);
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace siamese
