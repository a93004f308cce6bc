#pragma once

#include <stdexcept>
#include <string>

namespace deform {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter violates an operation's precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the range where an evaluator has been validated.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Quadrature too coarse: orthogonality was lost beyond tolerance.
class RefinementError : public Error {
 public:
  using Error::Error;
};

/// Numerical rank dropped below what the construction needs.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Iterative optimizer stopped without meeting its tolerance.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// I - sigma K is (numerically) singular, or G[sigma] <= 0.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Requested work exceeds a hard cost guard.
class CostGuardError : public Error {
 public:
  using Error::Error;
};

/// A model assumption fails on the computed data (e.g. x* outside a band).
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo run starved of samples or statistics.
class StatisticsError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration / report file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace deform
