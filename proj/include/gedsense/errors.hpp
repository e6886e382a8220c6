#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gedsense {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of iterations. Carries the best point found.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_x, double best_value, int iterations)
      : Error(what), best_x_(best_x), best_value_(best_value), iterations_(iterations) {}

  double best_x() const noexcept { return best_x_; }
  double best_value() const noexcept { return best_value_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_x_;
  double best_value_;
  int iterations_;
};

/// A sub-band would be mapped to zero DFT bins.
class DegeneratePlanError : public Error {
 public:
  using Error::Error;
};

/// Input data makes a statistic undefined (e.g. zero white-band energy).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A configuration field is invalid. `field()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A sensing window holds fewer samples than the operation requires.
class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

/// A sample file or its sidecar cannot be parsed.
class MalformedFileError : public Error {
 public:
  using Error::Error;
};

}  // namespace gedsense
