#include "siamese/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "siamese/error.hpp"
#include "siamese/exact_counter.hpp"
#include "siamese/hashing.hpp"
#include "siamese/metrics.hpp"
#include "siamese/snapshot.hpp"

namespace siamese {

using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, std::optional<T>& out) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  T v{};
  read(obj, key, v);
  out = v;
}

Threshold read_threshold(const json& j, const char* where) {
  reject_unknown(j, where, {"value", "fraction"});
  Threshold t;
  read(j, "value", t.value);
  read(j, "fraction", t.fraction);
  return t;
}

json threshold_json(const Threshold& t) { return {{"value", t.value}, {"fraction", t.fraction}}; }

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json spec_body(const ExperimentSpec& s, bool with_outputs) {
  json j;
  j["name"] = s.name;
  auto schemes = json::array();
  for (const auto sc : s.schemes) schemes.push_back(std::string(to_string(sc)));
  j["schemes"] = schemes;
  j["sketch"] = {{"rows", s.sketch.rows},
                 {"width", s.sketch.width},
                 {"counter_bits", s.sketch.counter_bits},
                 {"shared_bits", s.sketch.shared_bits},
                 {"merge", std::string(to_string(s.sketch.merge))}};
  j["memory_bytes"] = opt(s.memory_bytes);
  j["count_min_width"] = opt(s.count_min_width);
  if (s.benign_trace) {
    j["benign"] = {{"trace", *s.benign_trace}};
  } else {
    j["benign"] = {{"zipf",
                    {{"skew", s.zipf.skew},
                     {"universe", s.zipf.universe},
                     {"packets", s.zipf.packets},
                     {"seed", s.zipf.seed}}}};
  }
  j["attack"] = {{"fraction", s.attack.fraction},
                 {"width", opt(s.attack.width)},
                 {"packets_per_flow", s.attack.packets_per_flow},
                 {"interleave", std::string(to_string(s.attack.interleave))},
                 {"mix", std::string(to_string(s.attack.mix))},
                 {"trace", opt(s.attack.trace)}};
  j["snapshot_interval"] = s.snapshot_interval;
  auto apps = json::array();
  for (const auto a : s.applications) apps.push_back(std::string(to_string(a)));
  j["applications"] = apps;
  j["heavy_hitter_threshold"] = threshold_json(s.heavy_hitter_threshold);
  j["change_threshold"] = threshold_json(s.change_threshold);
  j["seed"] = s.seed;
  if (with_outputs) {
    j["output"] = opt(s.output);
    j["json_output"] = opt(s.json_output);
    j["snapshot_dir"] = opt(s.snapshot_dir);
  }
  return j;
}

Trace read_any_trace(const std::string& path) {
  const std::filesystem::path p(path);
  if (!std::filesystem::exists(p)) throw IoError("trace not found: " + path);
  if (p.extension() == ".txt") {
    std::ifstream in(p);
    if (!in) throw IoError("cannot open trace " + path);
    return read_text_trace(in);
  }
  return read_trace(p);
}

std::string interleave_label(const ExperimentSpec& spec) {
  if (spec.attack.trace)
    return "file/" + std::string(to_string(spec.attack.mix));
  if (spec.attack.fraction <= 0.0) return "none";
  return std::string(to_string(spec.attack.interleave)) + "/" +
         std::string(to_string(spec.attack.mix));
}

template <class F>
decltype(auto) visit_sketch(AnySketch& s, F&& f) {
  return std::visit(std::forward<F>(f), s);
}

}  // namespace

std::string_view to_string(Application a) noexcept {
  switch (a) {
    case Application::kCounters: return "counters";
    case Application::kAccuracy: return "accuracy";
    case Application::kHeavyHitters: return "heavy-hitters";
    case Application::kFsd: return "fsd";
    case Application::kEntropy: return "entropy";
    case Application::kChange: return "change";
  }
  return "?";
}

Application parse_application(std::string_view s) {
  for (const auto a : {Application::kCounters, Application::kAccuracy, Application::kHeavyHitters,
                       Application::kFsd, Application::kEntropy, Application::kChange})
    if (s == to_string(a)) return a;
  throw ConfigError("unknown application '" + std::string(s) + "'");
}

void ExperimentSpec::validate() const {
  if (schemes.empty()) throw ConfigError("no schemes selected");
  if (snapshot_interval == 0) throw ConfigError("snapshot interval must be > 0");
  if (!(attack.fraction >= 0.0 && attack.fraction <= 1.0))
    throw ConfigError("attack fraction must be in [0, 1]");
  if (attack.packets_per_flow == 0) throw ConfigError("packets per flow must be >= 1");
  if (!(heavy_hitter_threshold.value > 0.0)) throw ConfigError("heavy-hitter threshold must be > 0");
  if (!(change_threshold.value > 0.0)) throw ConfigError("change threshold must be > 0");
  if (!benign_trace) zipf.validate();
  SketchConfig probe = sketch;
  probe.seeds.clear();
  probe.with_seeds(seed);
  probe.validate();
}

bool ExperimentSpec::wants(Application a) const noexcept {
  return std::find(applications.begin(), applications.end(), a) != applications.end();
}

ExperimentSpec parse_spec(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, "config",
                 {"name", "schemes", "sketch", "memory_bytes", "count_min_width", "benign",
                  "attack", "snapshot_interval", "applications", "heavy_hitter_threshold",
                  "change_threshold", "seed", "output", "json_output", "snapshot_dir"});
  ExperimentSpec s;
  read(j, "name", s.name);
  if (const auto it = j.find("schemes"); it != j.end() && !it->is_null()) {
    std::vector<std::string> names;
    read(j, "schemes", names);
    s.schemes.clear();
    for (const auto& n : names) s.schemes.push_back(parse_scheme(n));
  }
  if (const auto it = j.find("sketch"); it != j.end() && !it->is_null()) {
    reject_unknown(*it, "sketch", {"rows", "width", "counter_bits", "shared_bits", "merge"});
    read(*it, "rows", s.sketch.rows);
    read(*it, "width", s.sketch.width);
    read(*it, "counter_bits", s.sketch.counter_bits);
    read(*it, "shared_bits", s.sketch.shared_bits);
    std::string merge;
    read(*it, "merge", merge);
    if (!merge.empty()) s.sketch.merge = parse_merge_mode(merge);
  }
  read(j, "memory_bytes", s.memory_bytes);
  read(j, "count_min_width", s.count_min_width);
  if (const auto it = j.find("benign"); it != j.end() && !it->is_null()) {
    reject_unknown(*it, "benign", {"trace", "zipf"});
    read(*it, "trace", s.benign_trace);
    if (const auto z = it->find("zipf"); z != it->end() && !z->is_null()) {
      reject_unknown(*z, "zipf", {"skew", "universe", "packets", "seed"});
      read(*z, "skew", s.zipf.skew);
      read(*z, "universe", s.zipf.universe);
      read(*z, "packets", s.zipf.packets);
      read(*z, "seed", s.zipf.seed);
    }
  }
  if (const auto it = j.find("attack"); it != j.end() && !it->is_null()) {
    reject_unknown(*it, "attack",
                   {"fraction", "width", "packets_per_flow", "interleave", "mix", "trace"});
    read(*it, "fraction", s.attack.fraction);
    read(*it, "width", s.attack.width);
    read(*it, "packets_per_flow", s.attack.packets_per_flow);
    std::string mode;
    read(*it, "interleave", mode);
    if (!mode.empty()) s.attack.interleave = parse_interleave(mode);
    mode.clear();
    read(*it, "mix", mode);
    if (!mode.empty()) s.attack.mix = parse_mix_mode(mode);
    read(*it, "trace", s.attack.trace);
  }
  read(j, "snapshot_interval", s.snapshot_interval);
  if (const auto it = j.find("applications"); it != j.end() && !it->is_null()) {
    std::vector<std::string> names;
    read(j, "applications", names);
    s.applications.clear();
    for (const auto& n : names) s.applications.push_back(parse_application(n));
  }
  if (const auto it = j.find("heavy_hitter_threshold"); it != j.end() && !it->is_null())
    s.heavy_hitter_threshold = read_threshold(*it, "heavy_hitter_threshold");
  if (const auto it = j.find("change_threshold"); it != j.end() && !it->is_null())
    s.change_threshold = read_threshold(*it, "change_threshold");
  read(j, "seed", s.seed);
  read(j, "output", s.output);
  read(j, "json_output", s.json_output);
  read(j, "snapshot_dir", s.snapshot_dir);
  s.validate();
  return s;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str());
}

std::string spec_to_json(const ExperimentSpec& spec) { return spec_body(spec, true).dump(2); }

std::string config_hash(const ExperimentSpec& spec) {
  const std::string canon = spec_body(spec, false).dump();
  const auto h = hash_bytes(
      KeyView(reinterpret_cast<const std::uint8_t*>(canon.data()), canon.size()), 0);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) out[15 - i] = kHex[(h >> (4 * i)) & 0xf];
  return out;
}

SchemeConfigs resolve_memory(const ExperimentSpec& spec) {
  SchemeConfigs c;
  c.dynamic = spec.sketch;
  c.dynamic.seeds = derive_seeds(spec.seed, c.dynamic.rows);
  if (c.dynamic.rows == 0) throw ConfigError("rows must be >= 1");
  if (spec.memory_bytes) {
    c.budget_bits = *spec.memory_bytes * 8;
    const std::uint64_t per_column = std::uint64_t(c.dynamic.rows) * (c.dynamic.counter_bits + 1);
    const std::uint64_t width = c.budget_bits / per_column / 4 * 4;
    if (width < 4 || width > std::numeric_limits<std::uint32_t>::max())
      throw ConfigError("memory budget cannot hold a dynamic sketch row");
    c.dynamic.width = static_cast<std::uint32_t>(width);
  } else {
    c.budget_bits = c.dynamic.memory_bits();
  }
  c.dynamic.validate();

  c.count_min.rows = c.dynamic.rows;
  c.count_min.seeds = c.dynamic.seeds;
  c.count_min.width = spec.count_min_width.value_or(
      static_cast<std::uint32_t>(c.budget_bits / (std::uint64_t(c.dynamic.rows) * 32)));
  const bool needs_cm =
      std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::kCountMin) != spec.schemes.end();
  if (needs_cm) c.count_min.validate();

  for (const auto s : spec.schemes) {
    const std::uint64_t bits =
        s == Scheme::kCountMin ? c.count_min.memory_bits() : c.dynamic.memory_bits();
    const double gap = std::abs(static_cast<double>(bits) - static_cast<double>(c.budget_bits)) /
                       static_cast<double>(c.budget_bits);
    if (gap > 0.01)
      throw ConfigError("memory mismatch: " + std::string(to_string(s)) + " uses " +
                        std::to_string(bits / 8) + " bytes against a budget of " +
                        std::to_string(c.budget_bits / 8));
  }
  return c;
}

AnySketch make_sketch(Scheme scheme, const SchemeConfigs& cfg) {
  switch (scheme) {
    case Scheme::kSiamese: return SiameseSketch(cfg.dynamic);
    case Scheme::kInstant: return InstantMergeSketch(cfg.dynamic);
    case Scheme::kCountMin: return CountMinSketch(cfg.count_min);
  }
  throw ConfigError("unknown scheme");
}

ExperimentStreams build_streams(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentStreams out;
  out.benign = spec.benign_trace ? read_any_trace(*spec.benign_trace) : gen_zipf(spec.zipf);
  Trace attack(out.benign.key_len());
  if (spec.attack.trace) {
    attack = read_any_trace(*spec.attack.trace);
  } else if (spec.attack.fraction > 0.0) {
    const std::uint64_t width = spec.attack.width.value_or(resolve_memory(spec).dynamic.width);
    const auto plan = plan_attack(width, spec.attack.fraction, spec.attack.packets_per_flow,
                                  spec.attack.interleave);
    attack = gen_attack(plan, mix64(spec.seed ^ 0xa77ac4ULL));
  }
  out.stream = mix_streams(out.benign, attack, spec.attack.mix, mix64(spec.seed + 0x3ULL));
  return out;
}

std::vector<MetricRow> run_experiment(const ExperimentSpec& spec, const ExperimentStreams& in) {
  spec.validate();
  const SchemeConfigs cfgs = resolve_memory(spec);
  const std::string hash = config_hash(spec);
  const std::string label = interleave_label(spec);
  const double attack_fraction = spec.attack.trace ? kNaN : spec.attack.fraction;
  const Trace& stream = in.stream;
  const std::uint64_t n = stream.size();

  ExactCounter benign_keys;
  for (const KeyView k : in.benign) benign_keys.observe(k);

  std::vector<AnySketch> sketches;
  for (const auto s : spec.schemes) sketches.push_back(make_sketch(s, cfgs));

  std::vector<MetricRow> rows;
  auto emit = [&](const AnySketch& sk, std::uint64_t len, const char* metric, double value) {
    MetricRow r;
    r.experiment = spec.name;
    r.scheme = std::string(to_string(scheme_of(sk)));
    r.memory_bytes = memory_bits(sk) / 8;
    r.stream_length = len;
    r.attack_fraction = attack_fraction;
    r.interleave = label;
    r.metric = metric;
    r.value = value;
    r.seed = spec.seed;
    r.config_hash = hash;
    rows.push_back(std::move(r));
  };

  std::vector<std::uint64_t> points;
  for (std::uint64_t p = spec.snapshot_interval; p < n; p += spec.snapshot_interval)
    points.push_back(p);
  points.push_back(n);

  ExactCounter oracle;
  std::uint64_t pos = 0;
  for (const std::uint64_t point : points) {
    for (std::uint64_t i = pos; i < point; ++i)
      if (benign_keys.truth(stream[i]) > 0) oracle.observe(stream[i]);
    for (auto& sk : sketches) {
      visit_sketch(sk, [&](auto& s) {
        for (std::uint64_t i = pos; i < point; ++i) s.encode(stream[i]);
      });
    }
    pos = point;

    const auto& universe = oracle.keys();
    std::vector<double> truths(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i)
      truths[i] = static_cast<double>(oracle.count_at(i));
    const auto truth_fsd = true_fsd(oracle);
    const std::uint64_t hh_phi = spec.heavy_hitter_threshold.resolve(oracle.total());
    const auto true_hh = true_heavy_hitters(oracle, hh_phi);

    for (auto& sk : sketches) {
      if (spec.wants(Application::kCounters))
        emit(sk, point, "counters", static_cast<double>(total_counters(sk)));
      visit_sketch(sk, [&](const auto& s) {
        if (spec.wants(Application::kAccuracy)) {
          std::vector<double> est(universe.size());
          for (std::size_t i = 0; i < universe.size(); ++i)
            est[i] = static_cast<double>(s.query(universe[i]));
          emit(sk, point, "are", universe.empty() ? kNaN : metric_are(truths, est));
          emit(sk, point, "rmse", universe.empty() ? kNaN : metric_rmse(truths, est));
        }
        if (spec.wants(Application::kHeavyHitters)) {
          const auto detected = detect_heavy_hitters(s, universe, hh_phi);
          const auto score = score_detection(detected, true_hh);
          emit(sk, point, "hh_precision", score.precision);
          emit(sk, point, "hh_recall", score.recall);
          emit(sk, point, "hh_f1", score.f1);
        }
        if (spec.wants(Application::kFsd) || spec.wants(Application::kEntropy)) {
          const auto est_fsd = estimate_fsd(s, universe);
          if (spec.wants(Application::kFsd))
            emit(sk, point, "fsd_wmre", universe.empty() ? kNaN : metric_wmre(est_fsd, truth_fsd));
          if (spec.wants(Application::kEntropy)) {
            if (universe.empty()) {
              emit(sk, point, "entropy_re", kNaN);
            } else {
              const auto re =
                  metric_re(estimate_entropy(est_fsd), estimate_entropy(truth_fsd));
              emit(sk, point, re.absolute ? "entropy_abs_error" : "entropy_re", re.value);
            }
          }
        }
      });
      if (spec.snapshot_dir) {
        std::filesystem::create_directories(*spec.snapshot_dir);
        save_snapshot(std::filesystem::path(*spec.snapshot_dir) /
                          (std::string(to_string(scheme_of(sk))) + "-" + std::to_string(point) +
                           ".skt"),
                      sk);
      }
    }
  }

  if (spec.wants(Application::kChange)) {
    const std::uint64_t half = n / 2;
    ExactCounter before, after;
    for (std::uint64_t i = 0; i < n; ++i)
      if (benign_keys.truth(stream[i]) > 0) (i < half ? before : after).observe(stream[i]);
    std::vector<FlowKey> universe = before.keys();
    for (const auto& k : after.keys())
      if (before.truth(k) == 0) universe.push_back(k);
    const std::uint64_t phi = spec.change_threshold.resolve(before.total() + after.total());
    const auto truth = true_changes(before, after, universe, phi);

    for (const auto scheme : spec.schemes) {
      AnySketch first = make_sketch(scheme, cfgs);
      AnySketch second = make_sketch(scheme, cfgs);
      std::visit(
          [&](auto& a) {
            auto& b = std::get<std::decay_t<decltype(a)>>(second);
            for (std::uint64_t i = 0; i < half; ++i) a.encode(stream[i]);
            for (std::uint64_t i = half; i < n; ++i) b.encode(stream[i]);
            const auto score = score_detection(detect_changes(a, b, universe, phi), truth);
            emit(first, n, "change_precision", score.precision);
            emit(first, n, "change_recall", score.recall);
            emit(first, n, "change_f1", score.f1);
          },
          first);
    }
  }
  return rows;
}

std::vector<MetricRow> run_experiment(const ExperimentSpec& spec) {
  const auto streams = build_streams(spec);
  auto rows = run_experiment(spec, streams);
  if (spec.output) save_report(*spec.output, rows);
  if (spec.json_output) {
    std::ofstream out(*spec.json_output, std::ios::binary);
    if (!out) throw IoError("cannot open " + *spec.json_output + " for writing");
    write_json(out, rows);
  }
  return rows;
}

}  // namespace siamese
