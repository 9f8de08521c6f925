#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrbox {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input-side failures: bad models, bad parameters, bad configuration.
/// The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidModel : public InputError {
 public:
  using InputError::InputError;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

/// A parameter outside the mathematical domain of an operation (eta <= 0, ...).
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// Boundary value requested too close to a threshold or a pole.
class ThresholdError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

/// Failures of a numerical procedure. The CLI maps these to exit code 3.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::ptrdiff_t index = -1)
      : Error(what), index_(index) {}

  /// Offending eigenvalue / step / point index, -1 when not applicable.
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

class SingularShift : public NumericError {
 public:
  using NumericError::NumericError;
};

class StepSizeError : public NumericError {
 public:
  using NumericError::NumericError;
};

class FitError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace lrbox
