#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hessdamp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, violated theorem hypothesis or malformed input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf in iterates, integrator step underflow, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Power iteration that ran out of iterations; keeps the last estimate.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : NumericalError(what), best_estimate_(best_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Special-function argument outside the supported domain (poles, branches).
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hessdamp
