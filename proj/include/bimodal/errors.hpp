#pragma once

#include <stdexcept>
#include <string>

namespace bimodal {

/// Argument outside the domain of a function or distribution.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature ran out of subdivisions before meeting tolerance.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(what), partial_(partial), error_estimate_(error_estimate) {}

  double partial_estimate() const { return partial_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

/// f(lo) and f(hi) do not straddle zero.
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A family could not be built (divergent normalizer, failed invariant check).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested moment does not exist for the given parameters.
class MomentUndefinedError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Survival probability underflowed while evaluating a hazard.
class HazardOverflowError : public std::overflow_error {
 public:
  HazardOverflowError(const std::string& what, double last_finite)
      : std::overflow_error(what), last_finite_(last_finite) {}
  double last_finite() const { return last_finite_; }

 private:
  double last_finite_;
};

}  // namespace bimodal
