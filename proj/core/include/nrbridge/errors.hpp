#pragma once

#include <stdexcept>
#include <string>

namespace nrbridge {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operator or state shapes do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Unknown identifier (bond name, suite name, ...).
class LookupError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double norm)
      : Error(what), offending_norm_(norm) {}
  double offending_norm() const noexcept { return offending_norm_; }

 private:
  double offending_norm_;
};

/// Non-finite entries appeared while integrating the master equation.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step)
      : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// The Liouvillian kernel is not one-dimensional. dimension() is -1 when
/// the sparse path could only establish that it is not unique.
class NonUniqueSteadyStateError : public Error {
 public:
  NonUniqueSteadyStateError(const std::string& what, long dimension)
      : Error(what), dimension_(dimension) {}
  long dimension() const noexcept { return dimension_; }

 private:
  long dimension_;
};

/// Drift matrix of a quadratic Lindbladian has a non-decaying mode.
class NoDecayError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or sweep result failed its accuracy contract.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Fock-space truncation is not converged.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NoPeakError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nrbridge
