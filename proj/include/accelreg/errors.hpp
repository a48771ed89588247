#pragma once

#include <stdexcept>
#include <string>

namespace accelreg {

// Base for every error raised by the library. Each subclass maps to one CLI
// exit code (see cli::exit_code_for).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad hyperparameter, out-of-domain
// argument, shape mismatch).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Floating-point trouble: overflow, non-convergence, divergence.
class NumericError : public Error {
 public:
  using Error::Error;
};

// An iteration blew up, almost always because the step size is too large for
// the operator norm.
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Malformed user data (dataset cells, config values).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace accelreg
