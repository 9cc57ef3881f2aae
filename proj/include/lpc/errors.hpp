#pragma once

#include <stdexcept>
#include <string>

namespace lpc {

/// Base of every error raised by the library. Validation errors describe bad
/// input; computation errors describe numerics that could not reach the
/// requested accuracy or hit a singularity.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ComputationError : public Error {
 public:
  using Error::Error;
};

// Validation family (CLI exit status 1).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class InputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class CoverageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class ResourceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Computation family (CLI exit status 2).
class NumericError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};
class ConvergenceError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};
class PoleError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};
class DegeneracyError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace lpc
