#pragma once

#include <stdexcept>
#include <string>

namespace gcopt {

/// Caller broke an API precondition (dimension mismatch, tangent based at the
/// wrong point, weight outside [0,1], ...).
struct ContractViolation : std::logic_error {
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// A point failed its geometry's validity check (non-SPD matrix, point off the
/// hyperboloid sheet, ...).
struct InvalidPointError : std::runtime_error {
  explicit InvalidPointError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of a scalar function.
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Solver/preset configuration problem; the message names the offending field.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite value encountered while iterating.
struct NumericalFailure : std::runtime_error {
  long iteration;
  NumericalFailure(const std::string& what, long iter)
      : std::runtime_error(what + " (iteration " + std::to_string(iter) + ")"),
        iteration(iter) {}
};

} // namespace gcopt
