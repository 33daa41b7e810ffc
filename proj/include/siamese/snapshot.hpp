#pragma once

// Versioned binary sketch dumps.
//
//   magic     4 bytes   "SCLS" late-merging, "SCIM" instant-merge, "SCCM" Count-Min
//   version   u16       currently 1
//   rows      u32
//   width     u32       base counters (dynamic) or 32-bit counters (Count-Min)
//   dynamic only:
//     counter_bits u8, shared_bits u8, merge u8 (0 sum, 1 max), lsb_sharing u8
//   seeds     rows x u64
//   body, per row:
//     dynamic:   width/4 group words (u32), then ceil(width/8) state bytes
//                (group 2i in the low nibble of byte i)
//     Count-Min: width counters (u32)
//
// All integers are little-endian.

#include <filesystem>
#include <iosfwd>

#include "siamese/schemes.hpp"

namespace siamese {

inline constexpr std::uint16_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const SiameseSketch& sketch);
void write_snapshot(std::ostream& out, const InstantMergeSketch& sketch);
void write_snapshot(std::ostream& out, const CountMinSketch& sketch);
void write_snapshot(std::ostream& out, const AnySketch& sketch);

// Throws FormatError on bad magic, unknown version, truncation or illegal state codes.
AnySketch read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const AnySketch& sketch);
AnySketch load_snapshot(const std::filesystem::path& path);

}  // namespace siamese
