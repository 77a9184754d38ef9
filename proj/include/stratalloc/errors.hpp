#pragma once

#include <stdexcept>

namespace stratalloc {

/// Malformed or out-of-contract input (bad sizes, weights, off-lattice θ).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The budget cannot buy at least one unit in each stratum.
class InfeasibleBudget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Both strata are censused, so θ* has no defined value.
class DegenerateAllocation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A bracketing root finder saw no sign change.
class RootNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stratalloc
