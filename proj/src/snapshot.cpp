#include "siamese/snapshot.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "siamese/error.hpp"

namespace siamese {

namespace {

constexpr std::array<char, 4> kMagicSiamese = {'S', 'C', 'L', 'S'};
constexpr std::array<char, 4> kMagicInstant = {'S', 'C', 'I', 'M'};
constexpr std::array<char, 4> kMagicCountMin = {'S', 'C', 'C', 'M'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> buf;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size()))
    throw FormatError("snapshot truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

void write_dynamic(std::ostream& out, const std::array<char, 4>& magic, const SketchConfig& cfg,
                   auto&& words_of, auto&& states_of) {
  out.write(magic.data(), magic.size());
  put_le<std::uint16_t>(out, kSnapshotVersion);
  put_le<std::uint32_t>(out, cfg.rows);
  put_le<std::uint32_t>(out, cfg.width);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(cfg.counter_bits));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(cfg.shared_bits));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(cfg.merge));
  put_le<std::uint8_t>(out, cfg.lsb_sharing ? 1 : 0);
  for (const auto s : cfg.seeds) put_le<std::uint64_t>(out, s);
  for (std::size_t r = 0; r < cfg.rows; ++r) {
    for (const auto w : words_of(r)) put_le<std::uint32_t>(out, w);
    const auto st = states_of(r);
    out.write(reinterpret_cast<const char*>(st.data()), static_cast<std::streamsize>(st.size()));
  }
  if (!out) throw IoError("failed writing snapshot");
}

SketchConfig read_dynamic_config(std::istream& in) {
  SketchConfig cfg;
  cfg.rows = get_le<std::uint32_t>(in);
  cfg.width = get_le<std::uint32_t>(in);
  cfg.counter_bits = get_le<std::uint8_t>(in);
  cfg.shared_bits = get_le<std::uint8_t>(in);
  const auto merge = get_le<std::uint8_t>(in);
  if (merge > 1) throw FormatError("snapshot has unknown merge mode " + std::to_string(merge));
  cfg.merge = static_cast<MergeMode>(merge);
  cfg.lsb_sharing = get_le<std::uint8_t>(in) != 0;
  if (cfg.rows == 0 || cfg.rows > 64 || cfg.width == 0 || cfg.width > (1u << 28))
    throw FormatError("snapshot header has implausible dimensions");
  cfg.seeds.resize(cfg.rows);
  for (auto& s : cfg.seeds) s = get_le<std::uint64_t>(in);
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("snapshot config invalid: ") + e.what());
  }
  return cfg;
}

void read_dynamic_body(std::istream& in, const SketchConfig& cfg, std::vector<std::uint32_t>& words,
                       std::vector<std::uint8_t>& states) {
  const std::size_t groups = cfg.width / 4;
  const std::size_t state_bytes = (groups + 1) / 2;
  words.reserve(cfg.rows * groups);
  states.reserve(cfg.rows * state_bytes);
  for (std::size_t r = 0; r < cfg.rows; ++r) {
    for (std::size_t g = 0; g < groups; ++g) words.push_back(get_le<std::uint32_t>(in));
    for (std::size_t b = 0; b < state_bytes; ++b) states.push_back(get_le<std::uint8_t>(in));
  }
}

}  // namespace

void write_snapshot(std::ostream& out, const SiameseSketch& sketch) {
  write_dynamic(out, kMagicSiamese, sketch.config(),
                [&](std::size_t r) { return sketch.row_words(r); },
                [&](std::size_t r) { return sketch.row_states(r); });
}

void write_snapshot(std::ostream& out, const InstantMergeSketch& sketch) {
  write_dynamic(out, kMagicInstant, sketch.config(),
                [&](std::size_t r) { return sketch.row_words(r); },
                [&](std::size_t r) { return sketch.row_states(r); });
}

void write_snapshot(std::ostream& out, const CountMinSketch& sketch) {
  const auto& cfg = sketch.config();
  out.write(kMagicCountMin.data(), kMagicCountMin.size());
  put_le<std::uint16_t>(out, kSnapshotVersion);
  put_le<std::uint32_t>(out, cfg.rows);
  put_le<std::uint32_t>(out, cfg.width);
  for (const auto s : cfg.seeds) put_le<std::uint64_t>(out, s);
  for (std::size_t r = 0; r < cfg.rows; ++r)
    for (const auto c : sketch.row_counters(r)) put_le<std::uint32_t>(out, c);
  if (!out) throw IoError("failed writing snapshot");
}

void write_snapshot(std::ostream& out, const AnySketch& sketch) {
  std::visit([&](const auto& s) { write_snapshot(out, s); }, sketch);
}

AnySketch read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size())) throw FormatError("snapshot truncated");
  const bool siamese = magic == kMagicSiamese;
  const bool instant = magic == kMagicInstant;
  const bool count_min = magic == kMagicCountMin;
  if (!siamese && !instant && !count_min) throw FormatError("not a sketch snapshot (bad magic)");
  const auto version = get_le<std::uint16_t>(in);
  if (version != kSnapshotVersion)
    throw FormatError("unsupported snapshot version " + std::to_string(version));

  if (count_min) {
    CountMinConfig cfg;
    cfg.rows = get_le<std::uint32_t>(in);
    cfg.width = get_le<std::uint32_t>(in);
    if (cfg.rows == 0 || cfg.rows > 64 || cfg.width == 0 || cfg.width > (1u << 28))
      throw FormatError("snapshot header has implausible dimensions");
    cfg.seeds.resize(cfg.rows);
    for (auto& s : cfg.seeds) s = get_le<std::uint64_t>(in);
    std::vector<std::uint32_t> counters;
    counters.reserve(std::size_t(cfg.rows) * cfg.width);
    for (std::size_t i = 0; i < std::size_t(cfg.rows) * cfg.width; ++i)
      counters.push_back(get_le<std::uint32_t>(in));
    return CountMinSketch::restore(std::move(cfg), counters);
  }

  SketchConfig cfg = read_dynamic_config(in);
  std::vector<std::uint32_t> words;
  std::vector<std::uint8_t> states;
  read_dynamic_body(in, cfg, words, states);
  if (siamese) return SiameseSketch::restore(std::move(cfg), words, states);
  return InstantMergeSketch::restore(std::move(cfg), words, states);
}

void save_snapshot(const std::filesystem::path& path, const AnySketch& sketch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_snapshot(out, sketch);
}

AnySketch load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  AnySketch sketch = read_snapshot(in);
  if (in.peek() != std::ifstream::traits_type::eof())
    throw FormatError("trailing bytes after snapshot body in " + path.string());
  return sketch;
}

}  // namespace siamese
