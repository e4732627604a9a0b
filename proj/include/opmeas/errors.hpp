#pragma once

#include <stdexcept>
#include <string>

namespace opmeas {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions, non-square input, odd tap count, bad digits.
struct ShapeError : Error {
  using Error::Error;
};

// Generic numerical failure (eigensolver non-convergence, overflow).
struct NumericError : Error {
  using Error::Error;
};

// Linear solve hit a pivot below the singularity threshold.
struct SingularMatrixError : NumericError {
  using NumericError::NumericError;
};

// A required spectral separation is absent (a in spec(G)).
struct DegenerateSpectrumError : NumericError {
  using NumericError::NumericError;
};

// A validated object failed its residual check; carries the residual.
struct ValidationError : Error {
  ValidationError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

// Unknown builtin name or malformed input file.
struct LookupError : Error {
  using Error::Error;
};

// A theorem hypothesis does not hold for the given inputs.
struct HypothesisError : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// Requested enumeration exceeds the configured budget.
struct ResourceError : Error {
  using Error::Error;
};

// Every measurement channel annihilates the current state.
struct DeadStateError : Error {
  using Error::Error;
};

}  // namespace opmeas
