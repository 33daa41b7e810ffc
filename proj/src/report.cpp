#include "siamese/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "siamese/error.hpp"

namespace siamese {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "experiment,scheme,memory_bytes,stream_length,attack_fraction,interleave,metric,value,"
         "seed,config_hash\n";
  for (const auto& r : rows) {
    out << csv_field(r.experiment) << ',' << r.scheme << ',' << r.memory_bytes << ','
        << r.stream_length << ',' << format_number(r.attack_fraction) << ','
        << csv_field(r.interleave) << ',' << r.metric << ',' << format_number(r.value) << ','
        << r.seed << ',' << r.config_hash << '\n';
  }
}

std::string to_csv(const std::vector<MetricRow>& rows) {
  std::ostringstream s;
  write_csv(s, rows);
  return s.str();
}

void write_json(std::ostream& out, const std::vector<MetricRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["experiment"] = r.experiment;
    o["scheme"] = r.scheme;
    o["memory_bytes"] = r.memory_bytes;
    o["stream_length"] = r.stream_length;
    o["attack_fraction"] = r.attack_fraction;
    o["interleave"] = r.interleave;
    o["metric"] = r.metric;
    o["value"] = std::isfinite(r.value) ? nlohmann::ordered_json(r.value) : nullptr;
    o["seed"] = r.seed;
    o["config_hash"] = r.config_hash;
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

void save_report(const std::filesystem::path& path, const std::vector<MetricRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (path.extension() == ".json") {
    write_json(out, rows);
  } else {
    write_csv(out, rows);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace siamese
