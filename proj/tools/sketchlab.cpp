// sketchlab: trace generation, attack planning, experiment runs, throughput
// benchmarks and closed-form numbers.
//
// Exit codes: 0 success, 1 internal error, 2 usage, 3 config, 4 I/O, 5 format.
// Failures print "error: <class>: <message>" on stderr.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "siamese/analysis.hpp"
#include "siamese/bench.hpp"
#include "siamese/error.hpp"
#include "siamese/experiment.hpp"
#include "siamese/hashing.hpp"
#include "siamese/report.hpp"
#include "siamese/snapshot.hpp"
#include "siamese/trace.hpp"
#include "siamese/traffic.hpp"

namespace {

using namespace siamese;

int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::kUsage: return 2;
    case ErrorClass::kConfig: return 3;
    case ErrorClass::kIo: return 4;
    case ErrorClass::kFormat: return 5;
  }
  return 1;
}

std::string digest(const Trace& t) {
  const auto& b = t.bytes();
  const std::uint64_t h = hash_bytes(b, mix64(t.key_len()));
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << h;
  return s.str();
}

void save_any_trace(const std::string& path, const Trace& t, bool text) {
  if (text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_text_trace(out, t);
  } else {
    write_trace(path, t);
  }
}

Trace load_any_trace(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".txt") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace " + path);
    return read_text_trace(in);
  }
  return read_trace(std::filesystem::path(path));
}

// Flags shared by run and bench; each is applied only when given.
struct SketchFlags {
  std::optional<std::string> schemes;
  std::optional<std::uint32_t> rows, width, counter_bits, shared_bits, count_min_width;
  std::optional<std::string> merge;
  std::optional<std::uint64_t> memory_bytes, seed;
  std::optional<std::string> trace;
  std::optional<double> zipf;
  std::optional<std::uint64_t> flows, packets;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--schemes", schemes, "Comma-separated: sc-lsb,instant,count-min");
    cmd->add_option("--rows", rows, "Rows d");
    cmd->add_option("--width", width, "Base counters per row (multiple of 4)");
    cmd->add_option("--counter-bits", counter_bits, "Base counter bits");
    cmd->add_option("--shared-bits", shared_bits, "Shared LSB bits");
    cmd->add_option("--merge", merge, "sum or max");
    cmd->add_option("--memory-bytes", memory_bytes, "Memory budget per scheme");
    cmd->add_option("--count-min-width", count_min_width, "Count-Min counters per row");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--trace", trace, "Benign trace file (SKTR, or .txt hex lines)");
    cmd->add_option("--zipf", zipf, "Zipf skew for a generated benign trace");
    cmd->add_option("--flows", flows, "Zipf flow universe");
    cmd->add_option("--packets", packets, "Zipf packets");
  }

  void apply(ExperimentSpec& s) const {
    if (schemes) {
      s.schemes.clear();
      std::stringstream ss(*schemes);
      std::string item;
      while (std::getline(ss, item, ',')) s.schemes.push_back(parse_scheme(item));
    }
    if (rows) s.sketch.rows = *rows;
    if (width) s.sketch.width = *width;
    if (counter_bits) s.sketch.counter_bits = *counter_bits;
    if (shared_bits) s.sketch.shared_bits = *shared_bits;
    if (merge) s.sketch.merge = parse_merge_mode(*merge);
    if (memory_bytes) s.memory_bytes = *memory_bytes;
    if (count_min_width) s.count_min_width = *count_min_width;
    if (seed) {
      s.seed = *seed;
      s.zipf.seed = *seed;
    }
    if (trace) s.benign_trace = *trace;
    if (zipf) s.zipf.skew = *zipf;
    if (flows) s.zipf.universe = *flows;
    if (packets) s.zipf.packets = *packets;
  }
};

int cmd_generate(double skew, std::uint64_t flows, std::uint64_t packets, std::uint64_t seed,
                 const std::string& out, bool text) {
  ZipfConfig cfg{skew, flows, packets, seed};
  const Trace t = gen_zipf(cfg);
  save_any_trace(out, t, text);
  std::cout << "packets " << t.size() << "\nkey_len " << t.key_len() << "\ndigest "
            << digest(t) << "\noutput " << out << '\n';
  return 0;
}

int cmd_attack(std::uint64_t width, double fraction, std::uint32_t ppf,
               const std::string& interleave, std::uint64_t seed,
               const std::optional<std::string>& out, bool text) {
  const auto plan = plan_attack(width, fraction, ppf, parse_interleave(interleave));
  std::cout << "width " << plan.width << "\nfraction " << format_number(plan.fraction)
            << "\ntarget_counters " << plan.target_counters << "\nexpected_flows "
            << format_number(plan.expected_flows) << "\nflows " << plan.flows
            << "\npackets_per_flow " << plan.packets_per_flow << "\npackets " << plan.packets()
            << "\ninterleave " << to_string(plan.interleave) << '\n';
  if (out) {
    const Trace t = gen_attack(plan, seed);
    save_any_trace(*out, t, text);
    std::cout << "digest " << digest(t) << "\noutput " << *out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency sketches with LSB-sharing counters: traces, attacks, experiments"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a Zipf trace");
  double g_skew = 1.0;
  std::uint64_t g_flows = 100000, g_packets = 1000000, g_seed = 1;
  std::string g_out;
  bool g_text = false;
  gen->add_option("--zipf", g_skew, "Skew (0 = uniform)")->capture_default_str();
  gen->add_option("--flows", g_flows, "Flow universe")->capture_default_str();
  gen->add_option("--packets", g_packets, "Packets")->capture_default_str();
  gen->add_option("--seed", g_seed, "Seed")->capture_default_str();
  gen->add_option("-o,--output", g_out, "Output trace path")->required();
  gen->add_flag("--text", g_text, "Write hex lines instead of SKTR");

  // attack
  auto* atk = app.add_subcommand("attack", "Plan a pollution attack and optionally write its trace");
  std::uint64_t a_width = 0, a_seed = 1;
  double a_fraction = 0.0;
  std::uint32_t a_ppf = 256;
  std::string a_interleave = "sequential";
  std::optional<std::string> a_out;
  bool a_text = false;
  atk->add_option("--width", a_width, "Estimated counters per row")->required();
  atk->add_option("--fraction", a_fraction, "Share of counters to saturate")->required();
  atk->add_option("--packets-per-flow", a_ppf, "Packets per attack flow")->capture_default_str();
  atk->add_option("--interleave", a_interleave, "sequential or round-robin")->capture_default_str();
  atk->add_option("--seed", a_seed, "Seed")->capture_default_str();
  atk->add_option("-o,--output", a_out, "Output trace path");
  atk->add_flag("--text", a_text, "Write hex lines instead of SKTR");

  // run
  auto* run = app.add_subcommand("run", "Run an experiment and write metric rows");
  std::optional<std::string> r_config, r_output, r_json, r_snapdir, r_attack_trace, r_interleave,
      r_mix, r_apps;
  std::optional<double> r_fraction, r_hh;
  std::optional<std::uint64_t> r_interval;
  bool r_hh_abs = false;
  SketchFlags r_flags;
  run->add_option("-c,--config", r_config, "JSON experiment config");
  r_flags.add_to(run);
  run->add_option("--attack-fraction", r_fraction, "Attack target fraction");
  run->add_option("--attack-trace", r_attack_trace, "Prepared attack trace");
  run->add_option("--interleave", r_interleave, "sequential or round-robin");
  run->add_option("--mix", r_mix, "append, prepend or random-merge");
  run->add_option("--snapshot-interval", r_interval, "Packets between snapshots");
  run->add_option("--applications", r_apps, "Comma-separated application list");
  run->add_option("--hh-threshold", r_hh, "Heavy-hitter threshold (fraction of packets)");
  run->add_flag("--hh-absolute", r_hh_abs, "Treat --hh-threshold as a packet count");
  run->add_option("-o,--output", r_output, "CSV (or .json) report path");
  run->add_option("--json-output", r_json, "Additional JSON report path");
  run->add_option("--snapshot-dir", r_snapdir, "Directory for sketch snapshots");

  // bench
  auto* bench = app.add_subcommand("bench", "Measure encode throughput in Mpps");
  std::size_t b_runs = 50;
  std::optional<std::string> b_output;
  SketchFlags b_flags;
  b_flags.add_to(bench);
  bench->add_option("--runs", b_runs, "Timed runs per scheme")->capture_default_str();
  bench->add_option("-o,--output", b_output, "CSV report path");

  // theory
  auto* theory = app.add_subcommand("theory", "Print closed-form numbers");
  theory->require_subcommand(1);
  auto* coupon = theory->add_subcommand("coupon", "Expected attack flows to cover a fraction");
  std::uint64_t t_w = 0;
  double t_fraction = 0.0;
  std::optional<std::uint64_t> t_m;
  coupon->add_option("--w,--width", t_w, "Counters")->required();
  coupon->add_option("--fraction", t_fraction, "Target fraction");
  coupon->add_option("--m", t_m, "Target counters (overrides --fraction)");
  auto* hyper = theory->add_subcommand("hyper", "Winner-take-all tally distribution");
  std::uint64_t t_s1 = 0, t_s2 = 0, t_n = 0;
  hyper->add_option("--s1", t_s1, "Packets of counter 1")->required();
  hyper->add_option("--s2", t_s2, "Packets of counter 2")->required();
  hyper->add_option("--n", t_n, "Wraparounds")->required();
  auto* harm = theory->add_subcommand("harmonic", "Harmonic number");
  std::uint64_t t_hn = 0;
  harm->add_option("--n", t_hn, "Index")->required();

  // snapshot-info
  auto* info = app.add_subcommand("snapshot-info", "Describe a sketch snapshot file");
  std::string i_path;
  info->add_option("path", i_path, "Snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*gen) return cmd_generate(g_skew, g_flows, g_packets, g_seed, g_out, g_text);
    if (*atk) return cmd_attack(a_width, a_fraction, a_ppf, a_interleave, a_seed, a_out, a_text);

    if (*run) {
      ExperimentSpec spec = r_config ? load_spec(*r_config) : ExperimentSpec{};
      r_flags.apply(spec);
      if (r_fraction) spec.attack.fraction = *r_fraction;
      if (r_attack_trace) spec.attack.trace = *r_attack_trace;
      if (r_interleave) spec.attack.interleave = parse_interleave(*r_interleave);
      if (r_mix) spec.attack.mix = parse_mix_mode(*r_mix);
      if (r_interval) spec.snapshot_interval = *r_interval;
      if (r_apps) {
        spec.applications.clear();
        std::stringstream ss(*r_apps);
        std::string item;
        while (std::getline(ss, item, ',')) spec.applications.push_back(parse_application(item));
      }
      if (r_hh) spec.heavy_hitter_threshold = {*r_hh, !r_hh_abs};
      if (r_output) spec.output = *r_output;
      if (r_json) spec.json_output = *r_json;
      if (r_snapdir) spec.snapshot_dir = *r_snapdir;
      if (!spec.output && !spec.json_output)
        throw UsageError("run needs an output path (--output or \"output\" in the config)");
      const auto rows = run_experiment(spec);
      std::cout << "rows " << rows.size() << "\nconfig_hash " << config_hash(spec) << '\n';
      return 0;
    }

    if (*bench) {
      ExperimentSpec spec;
      spec.zipf.packets = 1000000;
      b_flags.apply(spec);
      spec.validate();
      const Trace t = spec.benign_trace ? load_any_trace(*spec.benign_trace) : gen_zipf(spec.zipf);
      const SchemeConfigs cfg = resolve_memory(spec);
      std::vector<MetricRow> rows;
      std::cout << "scheme,packets,runs,mean_mpps,stddev_mpps,best_mpps\n";
      for (const auto s : spec.schemes) {
        const auto r = run_bench(s, cfg, t, b_runs);
        std::cout << to_string(s) << ',' << r.packets << ',' << r.runs << ','
                  << format_number(r.mean_mpps) << ',' << format_number(r.stddev_mpps) << ','
                  << format_number(r.best_mpps) << '\n';
        const AnySketch proto = make_sketch(s, cfg);
        rows.push_back({"bench", std::string(to_string(s)), memory_bits(proto) / 8, r.packets,
                        0.0, "none", "mpps", r.mean_mpps, spec.seed, config_hash(spec)});
        rows.push_back({"bench", std::string(to_string(s)), memory_bits(proto) / 8, r.packets,
                        0.0, "none", "mpps_stddev", r.stddev_mpps, spec.seed, config_hash(spec)});
      }
      if (b_output) save_report(*b_output, rows);
      return 0;
    }

    if (*coupon) {
      if (t_w == 0) throw ConfigError("w must be >= 1");
      const std::uint64_t m = t_m ? *t_m : plan_attack(t_w, t_fraction).target_counters;
      const double e = coupon_expect(t_w, m);
      std::cout << "w " << t_w << "\nm " << m << "\nexpected_flows " << format_number(e) << '\n';
      return 0;
    }
    if (*hyper) {
      if (t_n > t_s1 + t_s2) throw ConfigError("n exceeds s1 + s2");
      std::cout << "i,pmf\n";
      const std::uint64_t lo = t_n > t_s2 ? t_n - t_s2 : 0;
      for (std::uint64_t i = lo; i <= std::min(t_n, t_s1); ++i)
        std::cout << i << ',' << format_number(hyper_pmf(t_s1, t_s2, t_n, i)) << '\n';
      std::cout << "mean " << format_number(hyper_mean(t_s1, t_s2, t_n)) << "\nvar "
                << format_number(hyper_var(t_s1, t_s2, t_n)) << '\n';
      return 0;
    }
    if (*harm) {
      std::cout << "harmonic " << format_number(harmonic(t_hn)) << '\n';
      return 0;
    }

    if (*info) {
      const AnySketch s = load_snapshot(i_path);
      std::cout << "scheme " << to_string(scheme_of(s)) << "\nmemory_bytes " << memory_bits(s) / 8
                << "\ncounters " << total_counters(s) << '\n';
      std::visit([](const auto& sk) { std::cout << "rows " << sk.rows() << "\nwidth "
                                                << sk.width() << '\n'; },
                 s);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << error_class_name(e.error_class()) << ": " << e.what() << '\n';
    return exit_code(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
