#pragma once

// Report rows, one per (scheme, metric, snapshot).
//
// CSV columns, in order:
//   experiment, scheme, memory_bytes, stream_length, attack_fraction,
//   interleave, metric, value, seed, config_hash
// stream_length is the number of packets processed when the row was taken.
// Doubles use the shortest round-trip representation; NaN prints as "nan".
// The JSON form is an array of objects with the same keys (NaN becomes null).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace siamese {

struct MetricRow {
  std::string experiment;
  std::string scheme;
  std::uint64_t memory_bytes = 0;
  std::uint64_t stream_length = 0;
  double attack_fraction = 0.0;
  std::string interleave;
  std::string metric;
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

std::string format_number(double v);

void write_csv(std::ostream& out, const std::vector<MetricRow>& rows);
std::string to_csv(const std::vector<MetricRow>& rows);
void write_json(std::ostream& out, const std::vector<MetricRow>& rows);
void save_report(const std::filesystem::path& path, const std::vector<MetricRow>& rows);  // .json or CSV

}  // namespace siamese
