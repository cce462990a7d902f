#pragma once

#include <stdexcept>
#include <string>

namespace sphu {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad parameters, malformed configuration, failed
/// family validation. The CLI maps this to exit status 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A computation could not be completed to the requested accuracy.
/// The CLI maps this (and subclasses) to exit status 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double tail_ratio)
      : NumericalError(what), tail_ratio_(tail_ratio) {}

  double tail_ratio() const noexcept { return tail_ratio_; }

 private:
  double tail_ratio_;
};

/// The axial moment of |f|^2 vanishes, so the space variance is undefined.
class CenterOfMassError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Rounding produced a clearly negative variance; indicates a bug.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A computed uncertainty product fell below n/2 beyond the slack.
class BoundViolationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A log-log fit did not reach the required coefficient of determination.
class InconclusiveFitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Short machine-readable name of an error, used in reports.
inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const TruncationError*>(&e)) return "truncation";
  if (dynamic_cast<const CenterOfMassError*>(&e)) return "center_of_mass";
  if (dynamic_cast<const ConsistencyError*>(&e)) return "consistency";
  if (dynamic_cast<const BoundViolationError*>(&e)) return "bound_violation";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
  if (dynamic_cast<const InconclusiveFitError*>(&e)) return "inconclusive_fit";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  return "internal";
}

}  // namespace sphu
