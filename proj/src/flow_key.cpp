#include "siamese/flow_key.hpp"

#include <array>

#include "siamese/error.hpp"

namespace siamese {

FlowKey FlowKey::from_u64(std::uint64_t value) {
  std::array<std::uint8_t, 8> b{};
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::uint8_t>(value >> (8 * i));
  return FlowKey(KeyView(b));
}

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

FlowKey FlowKey::from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw FormatError("hex key has odd length: " + std::string(hex));
  FlowKey key;
  key.bytes_.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_digit(hex[i]);
    const int lo = hex_digit(hex[i + 1]);
    if (hi < 0 || lo < 0) throw FormatError("invalid hex key: " + std::string(hex));
    key.bytes_.push_back(static_cast<char>((hi << 4) | lo));
  }
  return key;
}

std::string FlowKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (const char c : bytes_) {
    const auto b = static_cast<std::uint8_t>(c);
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

}  // namespace siamese
