#include "siamese/sketch_config.hpp"

#include "siamese/error.hpp"
#include "siamese/hashing.hpp"

namespace siamese {

std::string_view to_string(MergeMode m) noexcept {
  return m == MergeMode::kSum ? "sum" : "max";
}

MergeMode parse_merge_mode(std::string_view s) {
  if (s == "sum") return MergeMode::kSum;
  if (s == "max") return MergeMode::kMax;
  throw ConfigError("unknown merge mode '" + std::string(s) + "' (expected sum|max)");
}

void SketchConfig::validate() const {
  if (rows < 1) throw ConfigError("rows must be >= 1");
  if (width == 0 || width % 4 != 0)
    throw ConfigError("width must be a positive multiple of 4, got " + std::to_string(width));
  if (counter_bits < 2 || counter_bits > 8)
    throw ConfigError("counter_bits must be in [2, 8], got " + std::to_string(counter_bits));
  if (lsb_sharing) {
    if (shared_bits == 0 || shared_bits % 2 != 0)
      throw ConfigError("shared_bits must be even and positive, got " + std::to_string(shared_bits));
    if (shared_bits >= counter_bits)
      throw ConfigError("shared_bits must be smaller than counter_bits");
  }
  if (!seeds.empty() && seeds.size() != rows)
    throw ConfigError("expected " + std::to_string(rows) + " seeds, got " +
                      std::to_string(seeds.size()));
}

SketchConfig& SketchConfig::with_seeds(std::uint64_t master) {
  if (seeds.empty()) seeds = derive_seeds(master, rows);
  return *this;
}

}  // namespace siamese
