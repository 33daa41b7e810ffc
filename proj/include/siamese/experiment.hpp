#pragma once

// Experiment runs: build a (possibly polluted) stream, feed it to every
// requested scheme and emit one report row per (scheme, metric, snapshot).
//
// JSON config (every key optional):
// {
//   "name": "run",
//   "schemes": ["sc-lsb", "instant", "count-min"],
//   "sketch": {"rows": 3, "width": 4096, "counter_bits": 8, "shared_bits": 4, "merge": "sum"},
//   "memory_bytes": null,            // budget; widths are derived from it when set
//   "count_min_width": null,         // explicit Count-Min width, must fit the budget
//   "benign": {"trace": "path"} | {"zipf": {"skew": 1.0, "universe": 100000,
//                                           "packets": 1000000, "seed": 1}},
//   "attack": {"fraction": 0.0, "width": null, "packets_per_flow": 256,
//              "interleave": "sequential", "mix": "random-merge", "trace": null},
//   "snapshot_interval": 100000,
//   "applications": ["counters", "accuracy", "heavy-hitters", "fsd", "entropy", "change"],
//   "heavy_hitter_threshold": {"value": 4e-5, "fraction": true},
//   "change_threshold": {"value": 4e-5, "fraction": true},
//   "seed": 1,
//   "output": null, "json_output": null, "snapshot_dir": null
// }

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "siamese/applications.hpp"
#include "siamese/report.hpp"
#include "siamese/schemes.hpp"
#include "siamese/sketch_config.hpp"
#include "siamese/trace.hpp"
#include "siamese/traffic.hpp"

namespace siamese {

enum class Application { kCounters, kAccuracy, kHeavyHitters, kFsd, kEntropy, kChange };
std::string_view to_string(Application a) noexcept;
Application parse_application(std::string_view s);  // throws ConfigError

struct AttackSpec {
  double fraction = 0.0;
  std::optional<std::uint64_t> width;  // defaults to the dynamic sketch width
  std::uint32_t packets_per_flow = 256;
  Interleave interleave = Interleave::kSequential;
  MixMode mix = MixMode::kRandomMerge;
  std::optional<std::string> trace;  // use a prepared attack trace instead
};

struct ExperimentSpec {
  std::string name = "run";
  std::vector<Scheme> schemes = {Scheme::kSiamese, Scheme::kInstant, Scheme::kCountMin};
  SketchConfig sketch;  // seeds are derived from `seed`
  std::optional<std::uint64_t> memory_bytes;
  std::optional<std::uint32_t> count_min_width;
  std::optional<std::string> benign_trace;
  ZipfConfig zipf;
  AttackSpec attack;
  std::uint64_t snapshot_interval = 100000;
  std::vector<Application> applications = {Application::kCounters, Application::kAccuracy,
                                           Application::kHeavyHitters, Application::kFsd,
                                           Application::kEntropy, Application::kChange};
  Threshold heavy_hitter_threshold{4e-5, true};
  Threshold change_threshold{4e-5, true};
  std::uint64_t seed = 1;
  std::optional<std::string> output;
  std::optional<std::string> json_output;
  std::optional<std::string> snapshot_dir;

  void validate() const;  // throws ConfigError
  bool wants(Application a) const noexcept;
};

// Throws FormatError on malformed JSON and ConfigError on unknown keys or bad values.
ExperimentSpec parse_spec(std::string_view json_text);
ExperimentSpec load_spec(const std::filesystem::path& path);
std::string spec_to_json(const ExperimentSpec& spec);
// 16 hex digits identifying everything that affects results (outputs excluded).
std::string config_hash(const ExperimentSpec& spec);

struct SchemeConfigs {
  SketchConfig dynamic;
  CountMinConfig count_min;
  std::uint64_t budget_bits = 0;
};
// Equal-memory configurations for all schemes. Throws ConfigError when a
// scheme's memory misses the budget by more than 1%.
SchemeConfigs resolve_memory(const ExperimentSpec& spec);

AnySketch make_sketch(Scheme scheme, const SchemeConfigs& cfg);

struct ExperimentStreams {
  Trace benign;
  Trace stream;  // benign mixed with attack traffic
};
// Throws IoError when a trace file is missing.
ExperimentStreams build_streams(const ExperimentSpec& spec);

std::vector<MetricRow> run_experiment(const ExperimentSpec& spec, const ExperimentStreams& in);
// Builds the streams, runs, and writes any configured outputs.
std::vector<MetricRow> run_experiment(const ExperimentSpec& spec);

}  // namespace siamese
