// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any gating criterion fails. argv[1] is the sketchlab binary.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reference.hpp"
#include "siamese/analysis.hpp"
#include "siamese/applications.hpp"
#include "siamese/bench.hpp"
#include "siamese/counter_group.hpp"
#include "siamese/exact_counter.hpp"
#include "siamese/experiment.hpp"
#include "siamese/hashing.hpp"
#include "siamese/instant_merge_sketch.hpp"
#include "siamese/metrics.hpp"
#include "siamese/siamese_sketch.hpp"
#include "siamese/traffic.hpp"

using namespace siamese;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_number(v); }

std::vector<std::uint8_t> fig5_owners() {
  std::vector<std::uint8_t> o;
  o.insert(o.end(), 16, 0);
  o.insert(o.end(), 256, 1);
  o.insert(o.end(), 17, 0);
  o.insert(o.end(), 401, 1);
  return o;
}

Outcome c1_coupon() {
  const double e = coupon_expect(155000, 77500);
  return {e >= 1.07e5 && e <= 1.09e5, "expected_flows=" + fmt(e)};
}

Outcome c2_worked_example() {
  const auto owners = fig5_owners();
  const GroupParams sum{8, 4, MergeMode::kSum};
  const GroupParams max{8, 4, MergeMode::kMax};
  const auto late = replay_group_pair(owners, sum, true);
  const auto inst_sum = replay_group_pair(owners, sum, false);
  const auto inst_max = replay_group_pair(owners, max, false);
  const auto shared = replay_shared_pair(PairExperiment{33, 0, 657, 4}, owners);
  const bool sc_ok = late.first == 34 && late.second == 658 && shared.est_lsb == 34 &&
                     shared.est_second == 658;
  const bool inst_ok = inst_sum.first == 674 && inst_sum.second == 674;
  return {sc_ok && inst_ok,
          "sc=" + std::to_string(late.first) + "/" + std::to_string(late.second) +
              " shared_model=" + std::to_string(shared.est_lsb) + "/" +
              std::to_string(shared.est_second) + " instant_sum=" + std::to_string(inst_sum.first) +
              " (expected 674) instant_max=" + std::to_string(inst_max.first) +
              "; sum-merge conserves all 690 packets, only max-merge yields 674"};
}

Outcome c3_capacity() {
  CounterGroup g(GroupParams{8, 4, MergeMode::kSum});
  if (g.value(0) != 0) return {false, "nonzero start"};
  for (std::uint64_t n = 1; n <= 1023; ++n) {
    g.increment(0);
    if (g.value(0) != n || g.state().pair(0) == PairState::kMerged)
      return {false, "wrong at " + std::to_string(n)};
  }
  const bool shared = g.state().pair(0) == PairState::kShared;
  g.increment(0);
  const bool merged = g.state().pair(0) == PairState::kMerged && g.value(0) == 1024;
  return {shared && merged, "exact 0..1023, merged on increment 1024"};
}

Outcome c4_worst_case() {
  std::uint64_t cases = 0, violations = 0;
  for (unsigned k : {2u, 4u}) {
    for (unsigned n = 1; n <= 12; ++n) {
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::uint8_t> owners(n);
        std::uint64_t ones = 0;
        for (unsigned i = 0; i < n; ++i) ones += owners[i] = (mask >> i) & 1u;
        const PairExperiment exp{n - ones, 0, ones, k};
        const auto o = replay_shared_pair(exp, owners);
        ++cases;
        if (o.est_lsb > o.est_merged) ++violations;
      }
    }
  }
  return {violations == 0,
          std::to_string(cases) + " interleavings, " + std::to_string(violations) + " violations"};
}

Outcome c5_average_case() {
  const std::array<std::uint64_t, 4> grid = {1, 10, 100, 500};
  const int trials = 100000;
  int cells = 0, bad = 0;
  double worst_z = 0;
  std::string first_bad;
  for (unsigned k : {2u, 4u, 6u})
    for (auto f : grid)
      for (auto g : grid)
        for (auto h : grid) {
          const PairExperiment exp{f, g, h, k};
          double sum = 0, sq = 0;
          for (int t = 0; t < trials; ++t) {
            const double v = double(simulate_pair(exp, mix64(cells) ^ std::uint64_t(t)).est_lsb);
            sum += v;
            sq += v * v;
          }
          const double mean = sum / trials;
          const double sd = std::sqrt(std::max(0.0, sq / trials - mean * mean));
          const double se = sd / std::sqrt(double(trials));
          const double lo = double(exp.first());
          const double hi = lo + double(1u << k);
          const double closed = lo + double(exp.residual()) * double(h) / double(exp.total());
          if (se > 0) worst_z = std::max(worst_z, std::abs(mean - closed) / se);
          const bool ok = mean >= lo - 3 * se && mean < hi && closed >= lo && closed < hi;
          if (!ok && first_bad.empty())
            first_bad = " first_bad f=" + std::to_string(f) + " g=" + std::to_string(g) +
                        " h=" + std::to_string(h) + " K=" + std::to_string(k) + " mean=" + fmt(mean);
          bad += !ok;
          ++cells;
        }
  return {bad == 0, std::to_string(cells) + " cells, " + std::to_string(bad) +
                        " outside [f+g - 3SE, f+g + 2^K); max |mean-closed form|/SE=" +
                        fmt(std::round(worst_z * 100) / 100) + first_bad};
}

Outcome c6_lemma() {
  std::mt19937_64 rng(20240611);
  const int trials = 100000;
  int cells = 0, bad = 0;
  double worst = 0;
  while (cells < 20) {
    const std::uint64_t s1 = 1 + rng() % 400, s2 = 1 + rng() % 400;
    const unsigned k = 2 + 2 * unsigned(rng() % 3);
    const PairExperiment exp{s1, 0, s2, k};
    const std::uint64_t n = exp.overflows();
    if (n < 2) continue;
    const double mu = hyper_mean(s1, s2, n), var = hyper_var(s1, s2, n);
    double m4 = 0;
    for (std::uint64_t i = 0; i <= std::min(n, s1); ++i)
      m4 += hyper_pmf(s1, s2, n, i) * std::pow(double(i) - mu, 4);
    double sum = 0, sq = 0;
    for (int t = 0; t < trials; ++t) {
      const double x = double(simulate_pair(exp, (std::uint64_t(cells) << 32) | unsigned(t)).x1);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / trials;
    const double svar = (sq - trials * mean * mean) / (trials - 1);
    const double se_mean = std::sqrt(var / trials);
    const double se_var = std::sqrt(std::max(m4 - var * var, 0.0) / trials);
    const double zm = std::abs(mean - mu) / se_mean, zv = std::abs(svar - var) / se_var;
    worst = std::max({worst, zm, zv});
    bad += zm > 3 || zv > 3;
    ++cells;
  }
  return {bad == 0, std::to_string(cells) + " cells, " + std::to_string(bad) +
                        " beyond 3 SE; worst z=" + fmt(std::round(worst * 100) / 100)};
}

Outcome c7_full_merge() {
  std::mt19937_64 rng(7);
  const GroupParams gp{8, 4, MergeMode::kSum};
  int streams = 0, mismatch = 0, skipped = 0;
  while (streams < 1000) {
    const double p = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const std::size_t len = 4000 + rng() % 3000;
    std::vector<std::uint8_t> owners(len);
    for (auto& o : owners) o = std::bernoulli_distribution(p)(rng);
    const auto late = replay_group_pair(owners, gp, true);
    const auto inst = replay_group_pair(owners, gp, false);
    if (late.state != PairState::kMerged || inst.state != PairState::kMerged) {
      ++skipped;
      continue;
    }
    ++streams;
    if (late.first != inst.first || late.first != len) ++mismatch;
  }
  return {mismatch == 0, std::to_string(streams) + " fully merged streams, " +
                             std::to_string(mismatch) + " mismatches (" + std::to_string(skipped) +
                             " streams not merged were redrawn)"};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

Outcome c8_dominance() {
  SketchConfig cfg;
  cfg.width = 4096;
  cfg.rows = 3;
  int dominance_breaks = 0, streams_in_range = 0;
  std::map<std::uint64_t, std::vector<double>> deficits;
  for (int s = 0; s < 30; ++s) {
    cfg.with_seeds(1000 + s);
    SiameseSketch late(cfg);
    InstantMergeSketch inst(cfg);
    const Trace t = gen_zipf({1.0, 100000, 2000000, std::uint64_t(500 + s)});
    bool in_range = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
      late.encode(t[i]);
      inst.encode(t[i]);
      if ((i + 1) % 100000 == 0) {
        const double a = double(late.total_counters()), b = double(inst.total_counters());
        if (a < b) ++dominance_breaks;
        const std::uint64_t n = i + 1;
        if (n == 500000 || n == 1000000 || n == 2000000) {
          const double d = (a - b) / a;
          deficits[n].push_back(d);
          in_range = in_range || (d > 0 && d <= 0.40);
        }
      }
    }
    streams_in_range += in_range;
  }
  std::string detail = std::to_string(dominance_breaks) + " snapshots with SC < instant; " +
                       std::to_string(streams_in_range) + "/30 streams with deficit in (0,40%];" +
                       " median deficit";
  for (auto& [n, v] : deficits) detail += " " + std::to_string(n) + ":" + fmt(median(v) * 100) + "%";
  return {dominance_breaks == 0 && streams_in_range == 30, detail};
}

ExperimentSpec attack_spec(std::uint64_t seed) {
  ExperimentSpec s;
  s.name = "attack";
  s.sketch.width = 4096;
  s.zipf = {1.0, 100000, 1000000, seed};
  s.attack.fraction = 0.5;
  s.attack.packets_per_flow = 256;
  s.attack.interleave = Interleave::kRoundRobin;
  s.attack.mix = MixMode::kRandomMerge;
  s.applications = {Application::kAccuracy};
  s.snapshot_interval = 1ull << 40;
  s.seed = seed;
  return s;
}

Outcome c9_attack() {
  std::map<std::string, std::vector<double>> are;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto spec = attack_spec(seed);
    for (const auto& r : run_experiment(spec, build_streams(spec)))
      if (r.metric == "are") are[r.scheme].push_back(r.value);
  }
  const double sc = median(are["sc-lsb"]), in = median(are["instant"]), cm = median(are["count-min"]);
  return {sc < in && sc < cm,
          "median ARE sc-lsb=" + fmt(sc) + " instant=" + fmt(in) + " count-min=" + fmt(cm)};
}

Outcome c10_one_sided() {
  struct Stream {
    std::string name;
    Trace trace;
    std::uint64_t seed;
  };
  std::vector<Stream> suite;
  for (double skew : {0.6, 1.0, 1.4})
    suite.push_back({"zipf" + fmt(skew), gen_zipf({skew, 100000, 1000000, 77}), 77});
  for (std::uint64_t seed : {1, 2}) {
    const auto spec = attack_spec(seed);
    suite.push_back({"attack" + std::to_string(seed), build_streams(spec).stream, seed});
  }
  ExperimentSpec base;
  std::map<std::string, std::uint64_t> under, missed;
  std::map<std::string, std::uint64_t> worst;
  for (const auto& st : suite) {
    base.seed = st.seed;
    const auto cfgs = resolve_memory(base);
    ExactCounter oracle;
    for (KeyView k : st.trace) oracle.observe(k);
    for (Scheme sc : {Scheme::kSiamese, Scheme::kInstant, Scheme::kCountMin}) {
      AnySketch sk = make_sketch(sc, cfgs);
      std::visit([&](auto& s) { for (KeyView k : st.trace) s.encode(k); }, sk);
      const std::string name(to_string(sc));
      under[name] += 0;
      missed[name] += 0;
      for (std::size_t i = 0; i < oracle.distinct(); ++i) {
        const std::uint64_t q = query(sk, oracle.keys()[i]), t = oracle.count_at(i);
        if (q < t) {
          ++under[name];
          worst[name] = std::max(worst[name], t - q);
        }
      }
      for (double phi : {1e-5, 1e-4, 1e-3}) {
        const std::uint64_t th = Threshold{phi, true}.resolve(oracle.total());
        for (const auto& k : true_heavy_hitters(oracle, th))
          if (query(sk, k) < th) ++missed[name];
      }
    }
  }
  bool ok = true;
  std::string detail;
  for (auto& [name, n] : under) {
    ok = ok && n == 0 && missed[name] == 0;
    detail += name + ": " + std::to_string(n) + " underestimated keys (max deficit " +
              std::to_string(worst[name]) + "), " + std::to_string(missed[name]) +
              " missed heavy hitters; ";
  }
  return {ok, detail + "over " + std::to_string(suite.size()) + " streams"};
}

Outcome c11_metrics() {
  std::mt19937_64 rng(1111);
  int bad = 0;
  auto close = [&](double a, double b) {
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(b))) ++bad;
  };
  // Formula cases.
  close(metric_are(std::vector<double>{10, 20}, std::vector<double>{11, 18}), 0.1);
  close(metric_rmse(std::vector<double>{10, 20}, std::vector<double>{13, 16}), std::sqrt(12.5));
  close(metric_f1(std::vector<FlowKey>{}, std::vector<FlowKey>{}), 0.0);
  close(metric_wmre(FlowSizeDistribution::from_sizes(std::vector<std::uint64_t>{2, 2}),
                    FlowSizeDistribution::from_sizes(std::vector<std::uint64_t>{1, 1})),
        2.0);
  close(metric_re(3.0, 2.0).value, 0.5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 300;
    std::vector<double> truth(n), est(n);
    std::vector<std::uint64_t> ts(n), es(n);
    std::vector<FlowKey> det, tru;
    std::vector<std::string> det_s, tru_s;
    for (std::size_t i = 0; i < n; ++i) {
      ts[i] = 1 + rng() % 60;
      es[i] = ts[i] + rng() % 7;
      truth[i] = double(ts[i]);
      est[i] = double(es[i]);
      const auto k = FlowKey::from_u64(rng());
      if (es[i] >= 40) {
        det.push_back(k);
        det_s.push_back(k.bytes());
      }
      if (ts[i] >= 40) {
        tru.push_back(k);
        tru_s.push_back(k.bytes());
      }
    }
    close(metric_are(truth, est), ref::are(truth, est));
    close(metric_rmse(truth, est), ref::rmse(truth, est));
    close(metric_f1(det, tru), ref::f1(det_s, tru_s));
    const auto ft = FlowSizeDistribution::from_sizes(ts), fe = FlowSizeDistribution::from_sizes(es);
    close(metric_wmre(fe, ft), ref::wmre(es, ts));
    const double rt = ref::entropy(ts), re = ref::entropy(es);
    close(estimate_entropy(ft), rt);
    close(estimate_entropy(fe), re);
    if (rt != 0) close(metric_re(estimate_entropy(fe), estimate_entropy(ft)).value, std::abs(re - rt) / rt);
  }
  return {bad == 0, std::to_string(bad) + " mismatches over formula cases and 100 random instances"};
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome c12_determinism(const std::string& sketchlab) {
  if (sketchlab.empty()) return {false, "sketchlab path not given"};
  const auto dir = std::filesystem::temp_directory_path() / "siamese_acceptance_determinism";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string args = " run --width 4096 --packets 300000 --attack-fraction 0.5 "
                           "--interleave round-robin --snapshot-interval 100000 --seed 12 -o ";
  const int a = run_command(sketchlab + args + (dir / "a.csv").string() + " > /dev/null");
  const int b = run_command(sketchlab + args + (dir / "b.csv").string() + " > /dev/null");
  const std::string ca = slurp(dir / "a.csv"), cb = slurp(dir / "b.csv");
  std::filesystem::remove_all(dir);
  const bool ok = a == 0 && b == 0 && !ca.empty() && ca == cb;
  return {ok, "exit " + std::to_string(a) + "/" + std::to_string(b) + ", " +
                  std::to_string(ca.size()) + " bytes, identical=" + (ca == cb ? "yes" : "no")};
}

Outcome c13_throughput() {
  ExperimentSpec spec;
  const auto cfgs = resolve_memory(spec);
  const Trace t = gen_zipf({1.0, 100000, 1000000, 13});
  std::map<Scheme, double> mpps;
  for (Scheme s : {Scheme::kSiamese, Scheme::kInstant, Scheme::kCountMin})
    mpps[s] = run_bench(s, cfgs, t, 50).mean_mpps;
  const double sc = mpps[Scheme::kSiamese], in = mpps[Scheme::kInstant],
               cm = mpps[Scheme::kCountMin];
  const double overhead = (in - sc) / in;
  return {cm > sc && cm > in && overhead <= 0.10,
          "Mpps sc-lsb=" + fmt(std::round(sc * 100) / 100) + " instant=" +
              fmt(std::round(in * 100) / 100) + " count-min=" + fmt(std::round(cm * 100) / 100) +
              " sc overhead vs instant=" + fmt(std::round(overhead * 1000) / 10) + "%"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string sketchlab = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    bool gating;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "coupon collector attack size", true, c1_coupon},
      {2, "two-flow decode example", true, c2_worked_example},
      {3, "shared pair capacity", true, c3_capacity},
      {4, "shared estimate never exceeds merged (exhaustive)", true, c4_worst_case},
      {5, "shared estimate mean bounds (Monte Carlo)", true, c5_average_case},
      {6, "winner tally is hypergeometric", true, c6_lemma},
      {7, "full merge equals instant sum-merge", true, c7_full_merge},
      {8, "late-merge counter dominance", true, c8_dominance},
      {9, "pollution attack accuracy direction", true, c9_attack},
      {10, "sum-mode one-sided error and recall", true, c10_one_sided},
      {11, "metric correctness", true, c11_metrics},
      {12, "report determinism", true, [&] { return c12_determinism(sketchlab); }},
      {13, "throughput (informational)", false, c13_throughput},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " ("
              << fmt(std::round(secs * 100) / 100) << " s): " << o.detail << std::endl;
    if (!o.pass && c.gating) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " gating criteria failed" : "all gating criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
