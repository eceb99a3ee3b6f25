#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ies {

/// Coarse failure class; the CLI maps each one to a process exit code.
enum class ErrorKind { kConfig, kData, kNumerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Stable machine-readable identifier, e.g. "isolated_point".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error(ErrorKind::kData, "dimension", msg) {}
};

class InvalidDataError : public Error {
 public:
  explicit InvalidDataError(const std::string& msg) : Error(ErrorKind::kData, "invalid_data", msg) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& msg)
      : Error(ErrorKind::kData, "insufficient_data", msg) {}
};

class InvalidParameterError : public Error {
 public:
  explicit InvalidParameterError(const std::string& msg)
      : Error(ErrorKind::kConfig, "invalid_parameter", msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(ErrorKind::kConfig, "config", msg) {}
};

/// Zero total variance: nothing to estimate a scale from.
class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& msg)
      : Error(ErrorKind::kNumerical, "degenerate_data", msg) {}
};

class DegenerateEmbeddingError : public Error {
 public:
  explicit DegenerateEmbeddingError(const std::string& msg)
      : Error(ErrorKind::kNumerical, "degenerate_embedding", msg) {}
};

/// Raised when some affinity rows sum to zero. Carries the offending row indices.
class IsolatedPointError : public Error {
 public:
  explicit IsolatedPointError(std::vector<std::ptrdiff_t> indices)
      : Error(ErrorKind::kNumerical, "isolated_point",
              std::to_string(indices.size()) + " point(s) have zero affinity to every other point"),
        indices_(std::move(indices)) {}

  const std::vector<std::ptrdiff_t>& indices() const noexcept { return indices_; }

 private:
  std::vector<std::ptrdiff_t> indices_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(ErrorKind::kData, "parse", msg), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// 2 config error, 3 data error, 4 numerical failure.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return 2;
    case ErrorKind::kData:
      return 3;
    case ErrorKind::kNumerical:
      return 4;
  }
  return 1;
}

}  // namespace ies
