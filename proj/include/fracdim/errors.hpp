#pragma once

#include <stdexcept>
#include <string>

namespace fracdim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violations: bad sets, malformed schedule strings, negative levels.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The graph (or the part of it a solve needs) is not connected.
class DisconnectedError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap before reaching tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual, std::size_t iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

/// A post-condition check failed (flow axioms, duality, edge-rule soundness).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The requested size exceeds the configured memory/time budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace fracdim
