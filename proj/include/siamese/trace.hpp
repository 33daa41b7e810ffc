#pragma once

// Packet traces: one fixed-length key per packet.
//
// SKTR binary format (little-endian):
//   "SKTR"    4 bytes magic
//   version   u16, currently 1
//   key_len   u16, > 0
//   records   key_len bytes each, until end of file
//
// Text format: one key per line as lowercase or uppercase hex; blank lines and
// lines starting with '#' are ignored; every key must have the same length.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <iterator>
#include <vector>

#include "siamese/flow_key.hpp"

namespace siamese {

inline constexpr std::uint16_t kTraceVersion = 1;

class Trace {
 public:
  explicit Trace(std::size_t key_len = 8);

  // Throws FormatError when the key length differs from key_len().
  void push_back(KeyView key);
  void reserve(std::size_t packets) { bytes_.reserve(packets * key_len_); }

  KeyView operator[](std::size_t i) const noexcept {
    return {bytes_.data() + i * key_len_, key_len_};
  }
  std::size_t size() const noexcept { return bytes_.size() / key_len_; }
  bool empty() const noexcept { return bytes_.empty(); }
  std::size_t key_len() const noexcept { return key_len_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

  class const_iterator {
   public:
    using iterator_category = std::random_access_iterator_tag;
    using value_type = KeyView;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = KeyView;

    const_iterator() = default;
    const_iterator(const Trace* t, std::size_t i) : trace_(t), i_(i) {}
    KeyView operator*() const noexcept { return (*trace_)[i_]; }
    const_iterator& operator++() noexcept { ++i_; return *this; }
    const_iterator operator++(int) noexcept { auto c = *this; ++i_; return c; }
    friend bool operator==(const const_iterator& a, const const_iterator& b) noexcept {
      return a.i_ == b.i_;
    }

   private:
    const Trace* trace_ = nullptr;
    std::size_t i_ = 0;
  };
  const_iterator begin() const noexcept { return {this, 0}; }
  const_iterator end() const noexcept { return {this, size()}; }

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::size_t key_len_;
  std::vector<std::uint8_t> bytes_;
};

void write_trace(std::ostream& out, const Trace& trace);
// Throws FormatError on a malformed header or a truncated record.
Trace read_trace(std::istream& in);
void write_trace(const std::filesystem::path& path, const Trace& trace);
Trace read_trace(const std::filesystem::path& path);

void write_text_trace(std::ostream& out, const Trace& trace);
Trace read_text_trace(std::istream& in);

}  // namespace siamese
