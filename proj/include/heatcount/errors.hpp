#pragma once

#include <stdexcept>
#include <string>

namespace heatcount {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter failed validation. `field()` names the offending parameter.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An argument lies outside the domain of the operation (t <= 0, empty range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptySpectrum : public Error {
 public:
  using Error::Error;
};

/// Spectrum data violates an invariant (negative eigenvalue, zero multiplicity).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Contour parameters are unusable (abscissa too small, e^{c*lambda} overflows).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature hit its subdivision cap; carries the estimate reached so far.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

}  // namespace heatcount
