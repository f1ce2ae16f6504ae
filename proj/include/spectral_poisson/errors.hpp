#pragma once

#include <stdexcept>
#include <string>

namespace spoisson {

// Argument outside the mathematical domain of a function (k >= 1, x outside [-1,1], ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Violated structural precondition (overlapping intervals, shape mismatch, bad tag pair).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Singular pivots, failed posterior checks, size guards in numerical kernels.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spoisson
