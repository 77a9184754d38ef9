#include "stratalloc/report.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "stratalloc/reference_values.hpp"

namespace stratalloc {

namespace {

std::string describe(const char* format, double a, double b) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b);
  return buffer;
}

void compare_reference_row(const StratifiedPopulation& pop, const CostBudget& budget,
                           const reference::AllocationRow& row, const AllocationReport& report,
                           std::vector<AuditNote>& notes) {
  auto integer_cell = [&](const char* column, std::int64_t printed, std::int64_t computed) {
    if (printed != computed) {
      notes.push_back({"reference-table",
                       std::string(column) + ": table prints " + std::to_string(printed) + ", computed " +
                           std::to_string(computed),
                       static_cast<double>(printed), static_cast<double>(computed)});
    }
  };
  integer_cell("n1_opt", row.n1_opt, report.n1_opt);
  integer_cell("n_w", row.n_w, report.n_w);
  integer_cell("n_c", row.n_c, report.n_c);

  auto real_cell = [&](const std::string& column, double printed, double computed, double resolution) {
    if (std::fabs(printed - computed) > resolution) {
      notes.push_back({"reference-table",
                       column + describe(": table prints %.7g, computed %.9g", printed, computed), printed,
                       computed});
    }
  };
  real_cell("max_var_stratified", row.max_var_stratified, report.max_var_stratified,
            reference::kVarianceResolution);
  real_cell("max_var_classical", row.max_var_classical, report.max_var_classical, reference::kVarianceResolution);
  real_cell("reduction_percent", row.reduction_percent, report.reduction_percent, reference::kReductionResolution);

  if (row.n1_opt != report.n1_opt) {
    const double local = local_search_objective(pop, budget, static_cast<double>(row.n1_opt));
    const double worst = max_variance(pop, budget, static_cast<double>(row.n1_opt), report.mode).value;
    notes.push_back({"reference-local-search",
                     "table n1=" + std::to_string(row.n1_opt) +
                         describe(": local maximum from theta=0.1 gives %.7g, true worst case is %.7g", local,
                                  worst),
                     row.max_var_stratified, local});
  }
}

}  // namespace

std::optional<std::size_t> reference_row_for(const StratifiedPopulation& population, const CostBudget& budget) {
  if (population.size() != reference::kTablePopulation) return std::nullopt;
  if (!(budget == CostBudget{reference::kTableC1, reference::kTableC2, reference::kTableBudget})) return std::nullopt;
  for (std::size_t i = 0; i < reference::kAllocationTable.size(); ++i) {
    const double w1 = reference::kAllocationTable[i].w1;
    if (std::llround(w1 * static_cast<double>(population.size())) == population.size1()) return i;
  }
  return std::nullopt;
}

double local_search_objective(const StratifiedPopulation& population, const CostBudget& budget, double n1) {
  const SampleSizes sizes{n1, implied_n2(budget, n1, EvaluationMode::Parity)};
  const double star = theta_star(population, sizes);
  if (star > 0.0 && star < population.w1()) return left_region_variance(population, sizes, star);
  return averaged_variance_closed(population, sizes, 0.5);
}

AllocationReport build_report(const StratifiedPopulation& population, const CostBudget& budget,
                              EvaluationMode mode) {
  const auto canon = canonicalize(population, budget);
  const auto& pop = canon.population;
  const auto& cost = canon.budget;

  const auto opt = optimize_allocation(pop, cost, mode);
  const auto classical_n = classical_sample_size(pop, cost);

  AllocationReport report;
  report.w1 = pop.w1();
  report.n1_opt = opt.allocation.n1;
  report.n2_opt = opt.allocation.n2;
  report.n_w = opt.allocation.total();
  report.n_c_real = classical_n.real;
  report.n_c = classical_n.integer;
  report.max_var_stratified = opt.max.value;
  report.theta_tilde = opt.max.theta_tilde;
  report.regime = opt.max.regime;
  report.max_var_classical = classical_max_variance_at(pop.size(), classical_n.integer);
  report.reduction_percent = reduction_percent(report.max_var_stratified, report.max_var_classical);
  report.mode = mode;

  auto& notes = report.audit_notes;
  const double closed = n1_closed_form(pop, cost);
  if (static_cast<std::int64_t>(std::floor(closed)) != report.n1_opt) {
    notes.push_back({"closed-form-n1",
                     describe("closed-form n1 = %.4f (floor %.0f) differs from the optimizer", closed,
                              std::floor(closed)),
                     std::floor(closed), static_cast<double>(report.n1_opt)});
  }

  const SampleSizes at_opt{static_cast<double>(report.n1_opt),
                           implied_n2(cost, static_cast<double>(report.n1_opt), mode)};
  const double printed_half = half_variance_printed(pop, at_opt);
  const double half = middle_region_variance(pop, at_opt, 0.5);
  if (std::fabs(printed_half - half) > 1e-9 * std::fabs(half)) {
    notes.push_back({"half-variance-formula",
                     describe("printed D(0.5) formula gives %.9g, piecewise form gives %.9g", printed_half, half),
                     half, printed_half});
  }

  if (mode == EvaluationMode::Parity) {
    const FeasibleRange range = validate_budget(pop, cost);
    for (std::int64_t neighbour : {report.n1_opt - 1, report.n1_opt + 1}) {
      if (neighbour < range.first || neighbour > range.last) continue;
      const double value = allocation_objective(pop, cost, static_cast<double>(neighbour), mode);
      if (value < report.max_var_stratified) {
        notes.push_back({"integer-neighbour",
                         describe("n1 = %.0f has a lower objective (%.9g); search kept the bracket midpoint",
                                  static_cast<double>(neighbour), value),
                         report.max_var_stratified, value});
      }
    }
  }

  if (const auto row = reference_row_for(pop, cost)) {
    compare_reference_row(pop, cost, reference::kAllocationTable[*row], report, notes);
  }

  if (canon.swapped) {
    report.w1 = population.w1();
    std::swap(report.n1_opt, report.n2_opt);
  }
  return report;
}

}  // namespace stratalloc
