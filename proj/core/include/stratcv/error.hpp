#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stratcv {

// Every error carries a short machine-readable code; the CLI prints
// "error: <code>: <message>" and exits nonzero.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("invalid-argument", message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error("numeric-error", message) {}
};

class DegenerateStratification : public Error {
 public:
  explicit DegenerateStratification(const std::string& message)
      : Error("degenerate-stratification", message) {}
};

class UndefinedCorrelation : public Error {
 public:
  explicit UndefinedCorrelation(const std::string& message)
      : Error("undefined-correlation", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io-error", message) {}
};

/// Receives messages about conditions that are allowed but suspicious, such
/// as k larger than a hospital or single-class training data.
using WarningSink = std::function<void(std::string_view)>;

}  // namespace stratcv
