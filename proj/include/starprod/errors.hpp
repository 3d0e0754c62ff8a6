#pragma once

#include <stdexcept>
#include <string>

namespace starprod {

/// Shape or extent mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite data or a numerically failed computation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested size exceeds what the dense representation can handle.
class CapacityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A map that must be invertible is singular (or nearly so).
class InvertibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or unsupported configuration of an operation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iteration failed to reach its tolerance; carries the final residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double final_residual)
      : std::runtime_error(what), final_residual_(final_residual) {}
  double final_residual() const { return final_residual_; }

 private:
  double final_residual_;
};

/// Malformed input document; carries a path into the document.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string path)
      : std::runtime_error(what + " (at " + path + ")"), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Unsupported schema version in an input document.
class VersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace starprod
