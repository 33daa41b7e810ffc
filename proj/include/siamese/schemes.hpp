#pragma once

#include <string_view>
#include <variant>

#include "siamese/count_min_sketch.hpp"
#include "siamese/instant_merge_sketch.hpp"
#include "siamese/siamese_sketch.hpp"

namespace siamese {

enum class Scheme { kSiamese, kInstant, kCountMin };

constexpr std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::kSiamese: return "sc-lsb";
    case Scheme::kInstant: return "instant";
    case Scheme::kCountMin: return "count-min";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s);  // throws ConfigError

using AnySketch = std::variant<SiameseSketch, InstantMergeSketch, CountMinSketch>;

constexpr Scheme scheme_of(const AnySketch& s) noexcept {
  return static_cast<Scheme>(s.index());
}

std::uint64_t query(const AnySketch& sketch, KeyView key) noexcept;
std::uint64_t memory_bits(const AnySketch& sketch) noexcept;
std::size_t total_counters(const AnySketch& sketch);

}  // namespace siamese
