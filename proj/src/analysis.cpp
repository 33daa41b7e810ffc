#include "siamese/analysis.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "siamese/error.hpp"
#include "siamese/hashing.hpp"
#include "siamese/instant_merge_sketch.hpp"

namespace siamese {

namespace {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

constexpr std::uint64_t kExactLimit = 60;

uint128 choose_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  uint128 c = 1;
  for (std::uint64_t j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

double log_choose(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

bool in_support(std::uint64_t s1, std::uint64_t s2, std::uint64_t n, std::uint64_t i) {
  if (n > s1 + s2) return false;
  const std::uint64_t lo = n > s2 ? n - s2 : 0;
  return i >= lo && i <= std::min(n, s1);
}

}  // namespace

double harmonic(std::uint64_t n) {
  Kahan acc;
  for (std::uint64_t k = n; k >= 1; --k) acc.add(1.0 / static_cast<double>(k));
  return acc.sum;
}

double coupon_expect(std::uint64_t w, std::uint64_t m) {
  if (m > w)
    throw ConfigError("cannot hit " + std::to_string(m) + " distinct of " + std::to_string(w) +
                      " counters");
  Kahan acc;
  for (std::uint64_t k = w; k > w - m; --k) acc.add(1.0 / static_cast<double>(k));
  return static_cast<double>(w) * acc.sum;
}

double hyper_pmf(std::uint64_t s1, std::uint64_t s2, std::uint64_t n, std::uint64_t i) {
  if (!in_support(s1, s2, n, i)) return 0.0;
  if (s1 + s2 <= kExactLimit) {
    const uint128 num = choose_exact(s1, i) * choose_exact(s2, n - i);
    return static_cast<double>(num) / static_cast<double>(choose_exact(s1 + s2, n));
  }
  return std::exp(log_choose(s1, i) + log_choose(s2, n - i) - log_choose(s1 + s2, n));
}

double hyper_pmf_by_draws(std::uint64_t s1, std::uint64_t s2, std::uint64_t n, std::uint64_t i) {
  if (!in_support(s1, s2, n, i)) return 0.0;
  const std::uint64_t t = s1 + s2;
  if (t <= kExactLimit) {
    const uint128 num = choose_exact(n, i) * choose_exact(t - n, s1 - i);
    return static_cast<double>(num) / static_cast<double>(choose_exact(t, s1));
  }
  return std::exp(log_choose(n, i) + log_choose(t - n, s1 - i) - log_choose(t, s1));
}

double hyper_mean(std::uint64_t s1, std::uint64_t s2, std::uint64_t n) {
  const double t = static_cast<double>(s1 + s2);
  return t == 0 ? 0.0 : static_cast<double>(n) * static_cast<double>(s1) / t;
}

double hyper_var(std::uint64_t s1, std::uint64_t s2, std::uint64_t n) {
  const double t = static_cast<double>(s1 + s2);
  if (t <= 1) return 0.0;
  const double p = static_cast<double>(s1) / t;
  return static_cast<double>(n) * p * (1 - p) * (t - static_cast<double>(n)) / (t - 1);
}

PairOutcome replay_shared_pair(const PairExperiment& exp, std::span<const std::uint8_t> owners) {
  std::uint64_t ones = 0;
  for (const auto o : owners) {
    if (o > 1) throw std::invalid_argument("pair owner must be 0 or 1");
    ones += o;
  }
  if (owners.size() != exp.total() || ones != exp.h)
    throw std::invalid_argument("owner sequence does not match the pair experiment");

  SharedPair sp;
  for (const auto o : owners) sp.add(o, exp.k);
  PairOutcome out;
  out.x1 = sp.msb[0];
  out.x2 = sp.msb[1];
  out.est_lsb = sp.decode(0, exp.k);
  out.est_second = sp.decode(1, exp.k);
  out.est_merged = sp.joint(exp.k);
  out.est_unmerged = exp.first();
  return out;
}

std::vector<std::uint8_t> random_owners(const PairExperiment& exp, std::uint64_t seed) {
  // Sequential draws without replacement give every ordering equal probability.
  std::mt19937_64 rng(mix64(seed));
  std::vector<std::uint8_t> owners;
  owners.reserve(exp.total());
  std::uint64_t left0 = exp.first();
  std::uint64_t left1 = exp.h;
  while (left0 + left1 > 0) {
    const std::uint64_t left = left0 + left1;
    const auto pick = static_cast<std::uint64_t>((static_cast<uint128>(rng()) * left) >> 64);
    if (pick < left0) {
      owners.push_back(0);
      --left0;
    } else {
      owners.push_back(1);
      --left1;
    }
  }
  return owners;
}

PairOutcome simulate_pair(const PairExperiment& exp, std::uint64_t seed) {
  const auto owners = random_owners(exp, seed);
  return replay_shared_pair(exp, owners);
}

PairReadout replay_group_pair(std::span<const std::uint8_t> owners, const GroupParams& gp,
                              bool late) {
  std::uint32_t word = 0;
  GroupState state;
  for (const auto o : owners) {
    if (late) {
      group::increment(word, state, o & 1u, gp);
    } else {
      instant::increment(word, state, o & 1u, gp.counter_bits, gp.merge);
    }
  }
  PairReadout out;
  if (late) {
    out.first = group::decode(word, state, 0, gp);
    out.second = group::decode(word, state, 1, gp);
  } else {
    out.first = instant::decode(word, state, 0, gp.counter_bits);
    out.second = instant::decode(word, state, 1, gp.counter_bits);
  }
  out.state = state.pair(0);
  return out;
}

}  // namespace siamese
