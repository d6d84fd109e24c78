#pragma once

#include <stdexcept>
#include <string>

namespace riesz {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or numerically indistinguishable from) a kernel singularity.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Numerical procedure failed to converge or to meet its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CalibrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A grid or smoothing scale does not resolve the requested features.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Two computation paths that must agree did not.
class MismatchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Too few effective samples, or a degenerate (constant) series.
class SampleError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid experiment configuration. Line and column are 1-based;
/// zero means "not attached to a source position".
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + what
                       : what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace riesz
