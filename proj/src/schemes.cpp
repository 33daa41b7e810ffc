#include "siamese/schemes.hpp"

#include <string>

#include "siamese/error.hpp"

namespace siamese {

Scheme parse_scheme(std::string_view s) {
  for (const Scheme sc : {Scheme::kSiamese, Scheme::kInstant, Scheme::kCountMin})
    if (s == to_string(sc)) return sc;
  throw ConfigError("unknown scheme '" + std::string(s) + "' (expected sc-lsb|instant|count-min)");
}

std::uint64_t query(const AnySketch& sketch, KeyView key) noexcept {
  return std::visit([key](const auto& s) { return s.query(key); }, sketch);
}

std::uint64_t memory_bits(const AnySketch& sketch) noexcept {
  return std::visit([](const auto& s) { return s.memory_bits(); }, sketch);
}

std::size_t total_counters(const AnySketch& sketch) {
  return std::visit([](const auto& s) { return s.total_counters(); }, sketch);
}

}  // namespace siamese
