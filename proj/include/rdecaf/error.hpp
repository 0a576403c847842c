#pragma once

#include <stdexcept>
#include <string>

namespace rdecaf {

/// Coarse failure category; the CLI maps each one to its own exit code.
enum class ErrorKind {
  kConfig,     // malformed or inconsistent configuration
  kData,       // bad input data or a violated operation precondition
  kNumerical,  // a solver could not produce a valid result
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::kNumerical, what) {}
};

}  // namespace rdecaf
