#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wnwe {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (odd N, negative exponent, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two containers that must agree in length or component count do not.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Reasons an equation system fails to be a weakly nonlinear wave equation.
enum class ValidationFailure {
  kNotSkewAdjoint,
  kUnequalLinearDegrees,
  kNonlinearDegreeTooHigh,
  kNonzeroAtOrigin,
  kMalformed,
};

const char* to_string(ValidationFailure failure);

class ValidationError : public Error {
 public:
  ValidationError(ValidationFailure failure, const std::string& what)
      : Error(what), failure_(failure) {}
  ValidationFailure failure() const noexcept { return failure_; }

 private:
  ValidationFailure failure_;
};

/// The fixed-point iteration blew up: non-finite samples or runaway iterate
/// differences. `step_index` is the zero-based index of the step that failed.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step_index, const std::string& what)
      : Error(what), step_index_(step_index) {}
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

/// Tolerance-mode iteration hit max_iterations before meeting the tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(std::size_t step_index, const std::string& what)
      : Error(what), step_index_(step_index) {}
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

/// Bad configuration text or flag. `key` names the offending key and `line`
/// is its 1-based line in the config file (0 for command-line flags).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& what)
      : Error(what), key_(std::move(key)), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wnwe
