#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratalloc/population.hpp"
#include "stratalloc/report.hpp"

namespace stratalloc {

struct AuditConfig {
  /// Population sizes for the exhaustive closed-form vs. summation sweep.
  std::vector<std::int64_t> oracle_populations{20, 40};
  double oracle_tolerance = 1e-9;

  std::int64_t table_population = 30000;
  CostBudget table_budget{1.0, 3.0, 1200.0};
  std::vector<double> table_weights{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
  EvaluationMode mode = EvaluationMode::Parity;

  std::vector<std::int64_t> switch_populations{100, 1000, 10000, 100000, 1000000, 10000000};
  /// Skip the O(N) regime scan above this size.
  std::int64_t switch_scan_limit = 10000000;
};

// (a) closed form vs. nuisance-set summation
struct OracleCase {
  std::int64_t population = 0;
  std::int64_t size1 = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::int64_t m = 0;
  double summed = 0.0;
  double closed = 0.0;
  double relative = 0.0;
};

struct OraclePopulationSummary {
  std::int64_t population = 0;
  std::int64_t cases = 0;
  double max_relative = 0.0;
  OracleCase worst;
};

struct OracleSection {
  double tolerance = 0.0;
  std::vector<OraclePopulationSummary> populations;
  std::vector<OracleCase> offending;  ///< capped at 50 entries
  std::int64_t offending_total = 0;
};

// (b) printed D(1/2) formulas vs. the piecewise form
struct HalfFormulaRow {
  double w1 = 0.0;
  std::int64_t n1 = 0;
  double printed = 0.0;
  double piecewise = 0.0;
  double relative = 0.0;
  bool flagged = false;
  double optimum_printed = 0.0;    ///< printed optimum-variance formula
  double optimum_piecewise = 0.0;  ///< piecewise D(1/2) at the closed-form n1
  double optimum_relative = 0.0;
  bool optimum_flagged = false;
};

// (c) closed-form n1 vs. optimizer
struct ClosedFormRow {
  double w1 = 0.0;
  double closed = 0.0;
  std::int64_t closed_floor = 0;
  std::int64_t optimizer = 0;
  Regime regime = Regime::AtHalf;
  std::optional<double> crossing_n1;  ///< n1 at which D(θ*) = D(1/2)
  bool flagged = false;
};

// (d) switch weight root vs. reference table
struct SwitchWeightRow {
  std::int64_t population = 0;
  double root = 0.0;
  double residual = 0.0;
  std::int64_t size1 = 0;
  std::optional<double> reference;
  std::optional<std::int64_t> reference_size1;
  std::optional<double> regime_switch;  ///< first-principles scan with the table budget
  double max_ratio_at_zero = 0.0;       ///< over w1 in [0.01, 0.5]; printed claim is < 1
  bool flagged = false;
  std::string error;  ///< root-finder failure, if any
};

// (e) reference allocation table, cell by cell
struct TableCell {
  std::string column;
  double printed = 0.0;
  double computed = 0.0;
  bool flagged = false;
};

struct TableRow {
  double w1 = 0.0;
  AllocationReport report;
  std::vector<TableCell> cells;
  std::optional<double> local_search_value;  ///< objective at the printed n1 under a local θ search
};

// w1 = 0.5 allocations used by the table row and by the plotted curve
struct CurveAllocation {
  std::string source;
  std::int64_t n1 = 0;
  double n2 = 0.0;
  double objective = 0.0;
};

struct AuditReport {
  EvaluationMode mode = EvaluationMode::Parity;
  OracleSection oracle;
  std::vector<HalfFormulaRow> half_formula;
  std::vector<ClosedFormRow> closed_form;
  std::vector<SwitchWeightRow> switch_weight;
  std::vector<TableRow> table;
  std::vector<TableCell> reference_run;  ///< single printed run at w1 = 0.25
  std::vector<CurveAllocation> curve_allocation;
};

OracleSection audit_oracle(const std::vector<std::int64_t>& populations, double tolerance);
std::vector<HalfFormulaRow> audit_half_formula(const AuditConfig& config);
std::vector<ClosedFormRow> audit_closed_form(const AuditConfig& config);
std::vector<SwitchWeightRow> audit_switch_weight(const AuditConfig& config);
std::vector<TableRow> audit_table(const AuditConfig& config);
std::vector<TableCell> audit_reference_run(const AuditConfig& config);
std::vector<CurveAllocation> audit_curve_allocation(const AuditConfig& config);

AuditReport run_audit(const AuditConfig& config);

/// Printed closed form for the optimal worst-case variance in the at-half regime.
double optimum_variance_printed(const StratifiedPopulation& population, const CostBudget& budget);

}  // namespace stratalloc
