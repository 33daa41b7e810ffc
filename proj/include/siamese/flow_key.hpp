#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace siamese {

// Borrowed view of a flow key's bytes.
using KeyView = std::span<const std::uint8_t>;

// Owned, opaque flow identifier (canonically 8 bytes, or 13 for a 5-tuple).
class FlowKey {
 public:
  FlowKey() = default;
  explicit FlowKey(KeyView bytes)
      : bytes_(reinterpret_cast<const char*>(bytes.data()), bytes.size()) {}

  static FlowKey from_u64(std::uint64_t value);
  static FlowKey from_hex(std::string_view hex);  // throws FormatError

  KeyView view() const noexcept {
    return {reinterpret_cast<const std::uint8_t*>(bytes_.data()), bytes_.size()};
  }
  operator KeyView() const noexcept { return view(); }

  std::size_t size() const noexcept { return bytes_.size(); }
  bool empty() const noexcept { return bytes_.empty(); }
  std::string hex() const;
  const std::string& bytes() const noexcept { return bytes_; }

  friend bool operator==(const FlowKey&, const FlowKey&) = default;
  friend auto operator<=>(const FlowKey&, const FlowKey&) = default;

 private:
  std::string bytes_;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& k) const noexcept {
    return std::hash<std::string>{}(k.bytes());
  }
};

}  // namespace siamese
