#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratalloc/allocation.hpp"
#include "stratalloc/population.hpp"
#include "stratalloc/variance.hpp"

namespace stratalloc {

/// A formula or table cell that disagrees with what the optimizer computed.
struct AuditNote {
  std::string topic;   ///< short machine-friendly tag, e.g. "closed-form-n1"
  std::string detail;  ///< human-readable explanation
  double expected = 0.0;
  double actual = 0.0;

  friend bool operator==(const AuditNote&, const AuditNote&) = default;
};

/// One row of an allocation table, in the caller's stratum labelling.
struct AllocationReport {
  double w1 = 0.0;
  std::int64_t n1_opt = 0;
  std::int64_t n2_opt = 0;
  std::int64_t n_w = 0;
  double n_c_real = 0.0;
  std::int64_t n_c = 0;
  double max_var_stratified = 0.0;
  double theta_tilde = 0.5;
  Regime regime = Regime::AtHalf;
  double max_var_classical = 0.0;
  double reduction_percent = 0.0;
  EvaluationMode mode = EvaluationMode::Parity;
  std::vector<AuditNote> audit_notes;

  friend bool operator==(const AllocationReport&, const AllocationReport&) = default;
};

/// Optimizes, adds the classical baseline and reduction, attaches audit notes,
/// and reports in the caller's labelling (strata swapped back if needed).
/// The classical baseline uses the integer part of n_c in both modes.
AllocationReport build_report(const StratifiedPopulation& population, const CostBudget& budget,
                              EvaluationMode mode);

/// Row of the reference allocation table matching this configuration, if any.
std::optional<std::size_t> reference_row_for(const StratifiedPopulation& population, const CostBudget& budget);

/// Optimizer objective with the inner maximization replaced by a local search
/// started at θ = 0.1: θ* when it lies in (0, w1), otherwise θ = 1/2. This is
/// not the worst case; the audit uses it to explain reference table cells.
double local_search_objective(const StratifiedPopulation& population, const CostBudget& budget, double n1);

}  // namespace stratalloc
