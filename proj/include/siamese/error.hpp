#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace siamese {

// Coarse error classes; the CLI maps them to exit codes and prints the name.
enum class ErrorClass { kUsage, kConfig, kIo, kFormat };

constexpr std::string_view error_class_name(ErrorClass c) noexcept {
  switch (c) {
    case ErrorClass::kUsage: return "usage";
    case ErrorClass::kConfig: return "config";
    case ErrorClass::kIo: return "io";
    case ErrorClass::kFormat: return "format";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorClass::kUsage, what) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorClass::kConfig, what) {}
};
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorClass::kIo, what) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& what) : Error(ErrorClass::kFormat, what) {}
};

}  // namespace siamese
