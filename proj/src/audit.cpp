#include "stratalloc/audit.hpp"

#include <algorithm>
#include <cmath>

#include "stratalloc/allocation.hpp"
#include "stratalloc/errors.hpp"
#include "stratalloc/format.hpp"
#include "stratalloc/reference_values.hpp"
#include "stratalloc/variance.hpp"

namespace stratalloc {

namespace {

constexpr std::size_t kOffendingCap = 50;

// Deviations are relative to max(|reference|, kZeroFloor). A census in both
// strata has variance exactly 0 while the closed forms leave ~1e-18 of
// cancellation error.
constexpr double kZeroFloor = 1e-8;

double relative_deviation(double reference, double value) {
  return std::fabs(value - reference) / std::max(std::fabs(reference), kZeroFloor);
}

bool is_reference_config(const AuditConfig& config) {
  return config.table_population == reference::kTablePopulation &&
         config.table_budget == CostBudget{reference::kTableC1, reference::kTableC2, reference::kTableBudget};
}

}  // namespace

double optimum_variance_printed(const StratifiedPopulation& population, const CostBudget& budget) {
  const double big_n = static_cast<double>(population.size());
  const double big1 = static_cast<double>(population.size1());
  const double big2 = static_cast<double>(population.size2());
  const double w1 = population.w1();
  const double root_sum = w1 * std::sqrt(budget.c1 * big_n * (big2 - 1.0)) +
                          std::sqrt(budget.c2 * big2 * (big_n * (w1 * w1 - 3.0 * w1 + 1.5) - w1));
  return root_sum * root_sum / (6.0 * budget.total * big_n * (big2 - 1.0)) -
         (1.5 * big_n - 2.0 * big1 - 2.0 * w1) / (6.0 * big_n * (big2 - 1.0));
}

OracleSection audit_oracle(const std::vector<std::int64_t>& populations, double tolerance) {
  OracleSection section;
  section.tolerance = tolerance;
  for (const auto size : populations) {
    OraclePopulationSummary summary;
    summary.population = size;
    for (std::int64_t size1 = 2; size1 <= size / 2; ++size1) {
      const auto pop = StratifiedPopulation::from_counts(size, size1);
      for (std::int64_t n1 = 1; n1 <= pop.size1(); ++n1) {
        for (std::int64_t n2 = 1; n2 <= pop.size2(); ++n2) {
          const Allocation allocation{n1, n2};
          for (std::int64_t m = 0; m <= size; ++m) {
            const double summed = averaged_variance_exact(pop, allocation, m);
            const double closed = averaged_variance_closed(pop, to_sizes(allocation),
                                                           static_cast<double>(m) / static_cast<double>(size));
            const OracleCase c{size, size1, n1, n2, m, summed, closed, relative_deviation(summed, closed)};
            ++summary.cases;
            if (c.relative > summary.max_relative || summary.cases == 1) {
              summary.max_relative = std::max(summary.max_relative, c.relative);
              summary.worst = c;
            }
            if (c.relative > tolerance) {
              ++section.offending_total;
              if (section.offending.size() < kOffendingCap) section.offending.push_back(c);
            }
          }
        }
      }
    }
    section.populations.push_back(summary);
  }
  return section;
}

std::vector<HalfFormulaRow> audit_half_formula(const AuditConfig& config) {
  std::vector<HalfFormulaRow> rows;
  for (const double w1 : config.table_weights) {
    const auto canon = canonicalize(StratifiedPopulation::from_weight(config.table_population, w1), config.table_budget);
    const auto& pop = canon.population;
    const auto& budget = canon.budget;
    HalfFormulaRow row;
    row.w1 = w1;
    row.n1 = optimize_allocation(pop, budget, config.mode).allocation.n1;
    const SampleSizes sizes{static_cast<double>(row.n1), implied_n2(budget, static_cast<double>(row.n1), config.mode)};
    row.printed = half_variance_printed(pop, sizes);
    row.piecewise = middle_region_variance(pop, sizes, 0.5);
    row.relative = relative_deviation(row.piecewise, row.printed);
    row.flagged = row.relative > 1e-9;

    const double closed_n1 = n1_closed_form(pop, budget);
    const SampleSizes at_closed{closed_n1, implied_n2(budget, closed_n1, EvaluationMode::Parity)};
    row.optimum_printed = optimum_variance_printed(pop, budget);
    row.optimum_piecewise = middle_region_variance(pop, at_closed, 0.5);
    row.optimum_relative = relative_deviation(row.optimum_piecewise, row.optimum_printed);
    row.optimum_flagged = row.optimum_relative > 1e-9;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ClosedFormRow> audit_closed_form(const AuditConfig& config) {
  std::vector<ClosedFormRow> rows;
  for (const double w1 : config.table_weights) {
    const auto canon = canonicalize(StratifiedPopulation::from_weight(config.table_population, w1), config.table_budget);
    ClosedFormRow row;
    row.w1 = w1;
    row.closed = n1_closed_form(canon.population, canon.budget);
    row.closed_floor = static_cast<std::int64_t>(std::floor(row.closed));
    const auto opt = optimize_allocation(canon.population, canon.budget, config.mode);
    row.optimizer = opt.allocation.n1;
    row.regime = opt.max.regime;
    try {
      row.crossing_n1 = n1_star(canon.population, canon.budget).root;
    } catch (const RootNotFound&) {
      row.crossing_n1.reset();
    }
    row.flagged = row.closed_floor != row.optimizer;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SwitchWeightRow> audit_switch_weight(const AuditConfig& config) {
  std::vector<SwitchWeightRow> rows;
  for (const auto size : config.switch_populations) {
    SwitchWeightRow row;
    row.population = size;
    for (const auto& ref : reference::kSwitchWeightTable) {
      if (ref.population == size) {
        row.reference = ref.w1_star;
        row.reference_size1 = ref.size1;
      }
    }
    try {
      const auto root = w1_star(size);
      row.root = root.root;
      row.residual = root.residual;
      row.size1 = static_cast<std::int64_t>(std::floor(root.root * static_cast<double>(size)));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    for (int k = 1; k <= 50; ++k) {
      row.max_ratio_at_zero = std::max(row.max_ratio_at_zero, audit_limits(size, 0.01 * k).at_zero);
    }
    if (size <= config.switch_scan_limit) row.regime_switch = regime_switch_w1(size, config.table_budget);
    row.flagged = !row.error.empty() ||
                  (row.reference && std::fabs(row.root - *row.reference) > reference::kSwitchWeightResolution);
    rows.push_back(row);
  }
  return rows;
}

std::vector<TableRow> audit_table(const AuditConfig& config) {
  std::vector<TableRow> rows;
  if (!is_reference_config(config)) return rows;
  for (const auto& ref : reference::kAllocationTable) {
    const bool requested = std::any_of(config.table_weights.begin(), config.table_weights.end(),
                                       [&](double w) { return std::fabs(w - ref.w1) < 1e-12; });
    if (!requested) continue;
    const auto pop = StratifiedPopulation::from_weight(config.table_population, ref.w1);
    TableRow row;
    row.w1 = ref.w1;
    row.report = build_report(pop, config.table_budget, config.mode);
    const auto& r = row.report;
    auto exact = [&](const char* column, std::int64_t printed, std::int64_t computed) {
      row.cells.push_back({column, static_cast<double>(printed), static_cast<double>(computed), printed != computed});
    };
    auto near = [&](const char* column, double printed, double computed, double resolution) {
      row.cells.push_back({column, printed, computed, std::fabs(printed - computed) > resolution});
    };
    exact("n1_opt", ref.n1_opt, r.n1_opt);
    exact("n_w", ref.n_w, r.n_w);
    exact("n_c", ref.n_c, r.n_c);
    near("max_var_stratified", ref.max_var_stratified, r.max_var_stratified, reference::kVarianceResolution);
    near("max_var_classical", ref.max_var_classical, r.max_var_classical, reference::kVarianceResolution);
    near("reduction_percent", ref.reduction_percent, r.reduction_percent, reference::kReductionResolution);
    if (ref.n1_opt != r.n1_opt) {
      const auto canon = canonicalize(pop, config.table_budget);
      row.local_search_value =
          local_search_objective(canon.population, canon.budget, static_cast<double>(ref.n1_opt));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TableCell> audit_reference_run(const AuditConfig& config) {
  std::vector<TableCell> cells;
  if (!is_reference_config(config)) return cells;
  const auto pop = StratifiedPopulation::from_weight(config.table_population, 0.25);
  const auto r = build_report(pop, config.table_budget, EvaluationMode::Parity);
  auto exact = [&](const char* column, std::int64_t printed, std::int64_t computed) {
    cells.push_back({column, static_cast<double>(printed), static_cast<double>(computed), printed != computed});
  };
  auto six_digits = [&](const char* column, double printed, double computed) {
    cells.push_back({column, printed, computed, format_number(printed) != format_number(computed)});
  };
  exact("n1_opt", reference::kReferenceRunN1, r.n1_opt);
  exact("n2_opt", reference::kReferenceRunN2, r.n2_opt);
  exact("n_c", reference::kReferenceRunNc, r.n_c);
  six_digits("max_var_stratified", reference::kReferenceRunStratified, r.max_var_stratified);
  six_digits("max_var_classical", reference::kReferenceRunClassical, r.max_var_classical);
  six_digits("reduction_percent", reference::kReferenceRunReduction, r.reduction_percent);
  return cells;
}

std::vector<CurveAllocation> audit_curve_allocation(const AuditConfig& config) {
  std::vector<CurveAllocation> rows;
  if (!is_reference_config(config)) return rows;
  const auto pop = StratifiedPopulation::from_weight(config.table_population, reference::kCurveWeight);
  const auto canon = canonicalize(pop, config.table_budget);
  std::int64_t table_n1 = 0;
  for (const auto& ref : reference::kAllocationTable) {
    if (ref.w1 == reference::kCurveWeight) table_n1 = ref.n1_opt;
  }
  for (const auto& [source, n1] : {std::pair<const char*, std::int64_t>{"table", table_n1},
                                   std::pair<const char*, std::int64_t>{"curve", reference::kCurveN1}}) {
    const double x = static_cast<double>(n1);
    rows.push_back({source, n1, implied_n2(canon.budget, x, config.mode),
                    allocation_objective(canon.population, canon.budget, x, config.mode)});
  }
  return rows;
}

AuditReport run_audit(const AuditConfig& config) {
  AuditReport report;
  report.mode = config.mode;
  report.oracle = audit_oracle(config.oracle_populations, config.oracle_tolerance);
  report.half_formula = audit_half_formula(config);
  report.closed_form = audit_closed_form(config);
  report.switch_weight = audit_switch_weight(config);
  report.table = audit_table(config);
  report.reference_run = audit_reference_run(config);
  report.curve_allocation = audit_curve_allocation(config);
  return report;
}

}  // namespace stratalloc
