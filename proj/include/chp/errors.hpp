#pragma once

#include <stdexcept>
#include <string>

namespace chp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent cell / perforated-domain geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A model parameter violates its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Data of a pure-Neumann/periodic problem fails the compatibility condition.
class SolvabilityError : public Error {
 public:
  using Error::Error;
};

/// An iterative solve hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value encountered during time stepping.
class NumericsError : public Error {
 public:
  using Error::Error;
};

/// Micro and macro trajectories cannot be matched in time.
class InterpolationError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of a closed-form formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace chp
