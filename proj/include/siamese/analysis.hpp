#pragma once

// Closed-form attack and counter-sharing math, plus exact replays of a single
// counter pair used to check the sharing bounds empirically.

#include <cstdint>
#include <span>
#include <vector>

#include "siamese/counter_group.hpp"

namespace siamese {

// H_n with compensated summation; H_0 = 0.
double harmonic(std::uint64_t n);

// Expected uniform draws to hit m distinct of w counters: w (H_w - H_{w-m}).
// Throws ConfigError when m > w.
double coupon_expect(std::uint64_t w, std::uint64_t m);

// P(X = i) where X counts first-population items among n drawn without
// replacement from s1 + s2. Out-of-support i gives 0. Exact integer
// arithmetic when s1 + s2 <= 60, log-gamma otherwise.
double hyper_pmf(std::uint64_t s1, std::uint64_t s2, std::uint64_t n, std::uint64_t i);
// Same law written as C(n, i) C(s1+s2-n, s1-i) / C(s1+s2, s1).
double hyper_pmf_by_draws(std::uint64_t s1, std::uint64_t s2, std::uint64_t n, std::uint64_t i);
double hyper_mean(std::uint64_t s1, std::uint64_t s2, std::uint64_t n);
double hyper_var(std::uint64_t s1, std::uint64_t s2, std::uint64_t n);

// Two counters sharing a K-bit LSB. Counter 1 receives the target flow
// (f packets) plus other traffic (g); counter 2 receives h packets.
struct PairExperiment {
  std::uint64_t f = 0;
  std::uint64_t g = 0;
  std::uint64_t h = 0;
  unsigned k = 4;

  std::uint64_t first() const noexcept { return f + g; }
  std::uint64_t total() const noexcept { return f + g + h; }
  std::uint64_t overflows() const noexcept { return total() >> k; }
  std::uint64_t residual() const noexcept { return total() & ((std::uint64_t{1} << k) - 1); }
};

struct PairOutcome {
  std::uint64_t est_lsb = 0;       // counter 1 decoded from the shared pair: 2^K x1 + r
  std::uint64_t est_second = 0;    // counter 2 decoded from the shared pair
  std::uint64_t est_merged = 0;    // counter 1 had the pair been sum-merged
  std::uint64_t est_unmerged = 0;  // counter 1 with its own exact counter: f + g
  std::uint64_t x1 = 0;            // LSB wraps credited to counter 1
  std::uint64_t x2 = 0;
};

// Replays packets owned by counter 0 or 1 (in order) through a pair that
// shares its LSB from the first packet, with unbounded MSBs. The owner
// counts must equal f + g and h; throws std::invalid_argument otherwise.
PairOutcome replay_shared_pair(const PairExperiment& exp, std::span<const std::uint8_t> owners);

// Uniformly random ordering of f + g zeros and h ones.
std::vector<std::uint8_t> random_owners(const PairExperiment& exp, std::uint64_t seed);

PairOutcome simulate_pair(const PairExperiment& exp, std::uint64_t seed);

// Both slots of pair 0 in a single group after replaying `owners` through
// the late-merging machine (late = true) or the merge-on-overflow machine.
struct PairReadout {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  PairState state = PairState::kIndependent;
};
PairReadout replay_group_pair(std::span<const std::uint8_t> owners, const GroupParams& gp,
                              bool late);

}  // namespace siamese
