#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rodpulse {

// Every failure raised by the library derives from Error. The CLI maps
// ConfigError to exit status 2 and everything numerical to exit status 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration input. `key` is empty and `line` 0 when not tied to one.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {}, int line = 0)
      : Error(what), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class PoleProximityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GeometryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnsupportedRegimeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised by explicit stepping when a NaN/Inf appears. Carries the step index.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, long step)
      : NumericalError(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Hyperbolic factors of the printed series overflow beyond a finite horizon.
class OverflowError : public NumericalError {
 public:
  OverflowError(const std::string& what, double horizon)
      : NumericalError(what), horizon_(horizon) {}
  double horizon() const { return horizon_; }

 private:
  double horizon_;
};

class NoSignalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IncompleteReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace rodpulse
