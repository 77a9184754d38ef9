#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratalloc/population.hpp"
#include "stratalloc/search.hpp"
#include "stratalloc/variance.hpp"

namespace stratalloc {

/// Worst-case averaged variance as a function of n1, +inf where n1 or the
/// implied n2 leaves [1, N_k] (or (0, N_k] for the real-valued parity n2).
double allocation_objective(const StratifiedPopulation& population, const CostBudget& budget, double n1,
                            EvaluationMode mode);

struct OptimizationResult {
  Allocation allocation;
  MaxVarianceResult max;
  double search_midpoint = 0.0;     ///< midpoint of the final golden-section bracket
  std::int64_t search_n1 = 0;       ///< integer part of that midpoint
  int search_iterations = 0;
  int refinement_rounds = 0;
};

/// Minimax allocation by golden-section search over n1.
///
/// Parity mode searches [1, C/c1] against the real-n2 objective and returns
/// the integer part of the final midpoint, clamped to the feasible range.
/// Oracle mode searches the real-n2 relaxation over the feasible range, then
/// repeatedly scans an integer window around the incumbent against the
/// floored-n2 lattice objective until the incumbent stops moving. The window
/// half-width is max(5, ceil(c2/c1) + 1) to span one budget sawtooth.
/// Inputs must be canonical. Throws InfeasibleBudget / InvalidInput.
OptimizationResult optimize_allocation(const StratifiedPopulation& population, const CostBudget& budget,
                                       EvaluationMode mode);

/// Scan of every feasible integer n1; smallest n1 wins ties.
OptimizationResult exhaustive_allocation(const StratifiedPopulation& population, const CostBudget& budget,
                                         EvaluationMode mode);

/// Unrounded closed-form optimal n1 valid in the at-half regime.
double n1_closed_form(const StratifiedPopulation& population, const CostBudget& budget);

struct LimitRatios {
  double at_zero = 0.0;  ///< printed limit of D(1/2)/D(θ*) as n1 -> 0
  double at_full = 0.0;  ///< printed limit of D(1/2)/D(θ*) as n1 -> C/c1
};

/// Both printed limit-ratio expressions, evaluated verbatim.
LimitRatios audit_limits(std::int64_t population_size, double w1);

/// Root in (0, 1/2] of the printed n1 -> C/c1 limit ratio minus one.
RootResult w1_star(std::int64_t population_size);

/// Smallest w1 = N1/N at which the worst case at the top of the feasible n1
/// range moves from θ = 1/2 to θ*. Scans every N1 in [2, N/2]; nullopt when
/// the regime never switches or the budget is invalid for every N1.
std::optional<double> regime_switch_w1(std::int64_t population_size, const CostBudget& budget);

/// n1 at which the left-region maximum equals the value at θ = 1/2, found by
/// bisection over the feasible range with real-valued n2.
RootResult n1_star(const StratifiedPopulation& population, const CostBudget& budget);

struct ClassicalSampleSize {
  double real = 0.0;
  std::int64_t integer = 0;
};

/// n_c = C / (w1 c1 + w2 c2) and its integer part.
ClassicalSampleSize classical_sample_size(const StratifiedPopulation& population, const CostBudget& budget);

struct NeymanAllocation {
  double n = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
};

/// Cost-optimal allocation for known stratum proportions. Throws InvalidInput
/// when either proportion is 0 or 1.
NeymanAllocation neyman_allocation(const StratifiedPopulation& population, const CostBudget& budget,
                                   double theta1, double theta2);

/// (1 - stratified / classical) * 100. Throws InvalidInput for classical == 0.
double reduction_percent(double stratified, double classical);

}  // namespace stratalloc
