#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polardet {

enum class ErrorKind {
  InvalidInput,
  DegenerateGeometry,
  NonConvexInput,
  NonFiniteDiameter,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::NonConvexInput: return "NonConvexInput";
    case ErrorKind::NonFiniteDiameter: return "NonFiniteDiameter";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::size_t line = 0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  // 1-based source line for ParseError, 0 otherwise.
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace polardet
