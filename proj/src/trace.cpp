#include "siamese/trace.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "siamese/error.hpp"

namespace siamese {

Trace::Trace(std::size_t key_len) : key_len_(key_len) {
  if (key_len == 0 || key_len > 0xffff) throw FormatError("trace key length must be in [1, 65535]");
}

void Trace::push_back(KeyView key) {
  if (key.size() != key_len_)
    throw FormatError("key of " + std::to_string(key.size()) + " bytes in a trace of " +
                      std::to_string(key_len_) + "-byte keys");
  bytes_.insert(bytes_.end(), key.begin(), key.end());
}

void write_trace(std::ostream& out, const Trace& trace) {
  const auto len = static_cast<std::uint16_t>(trace.key_len());
  const std::array<char, 8> header = {'S', 'K', 'T', 'R',
                                      static_cast<char>(kTraceVersion & 0xff),
                                      static_cast<char>(kTraceVersion >> 8),
                                      static_cast<char>(len & 0xff),
                                      static_cast<char>(len >> 8)};
  out.write(header.data(), header.size());
  out.write(reinterpret_cast<const char*>(trace.bytes().data()),
            static_cast<std::streamsize>(trace.bytes().size()));
  if (!out) throw IoError("failed writing trace");
}

Trace read_trace(std::istream& in) {
  std::array<unsigned char, 8> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size()))
    throw FormatError("trace header truncated");
  if (header[0] != 'S' || header[1] != 'K' || header[2] != 'T' || header[3] != 'R')
    throw FormatError("not an SKTR trace (bad magic)");
  const unsigned version = header[4] | (header[5] << 8);
  if (version != kTraceVersion) throw FormatError("unsupported trace version " + std::to_string(version));
  const std::size_t key_len = header[6] | (header[7] << 8);
  if (key_len == 0) throw FormatError("trace header declares zero-length keys");

  const std::vector<std::uint8_t> body((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  if (body.size() % key_len != 0)
    throw FormatError("truncated record: " + std::to_string(body.size() % key_len) +
                      " trailing bytes");
  Trace trace(key_len);
  trace.reserve(body.size() / key_len);
  for (std::size_t off = 0; off < body.size(); off += key_len)
    trace.push_back(KeyView(body.data() + off, key_len));
  return trace;
}

void write_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_trace(out, trace);
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace " + path.string());
  return read_trace(in);
}

void write_text_trace(std::ostream& out, const Trace& trace) {
  for (const KeyView k : trace) out << FlowKey(k).hex() << '\n';
  if (!out) throw IoError("failed writing text trace");
}

Trace read_text_trace(std::istream& in) {
  std::vector<FlowKey> keys;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      keys.push_back(FlowKey::from_hex(std::string_view(line).substr(start)));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (keys.back().empty()) throw FormatError("line " + std::to_string(lineno) + ": empty key");
  }
  Trace trace(keys.empty() ? 8 : keys.front().size());
  trace.reserve(keys.size());
  for (const auto& k : keys) trace.push_back(k);
  return trace;
}

}  // namespace siamese
