#include "stratalloc/population.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratalloc/errors.hpp"

namespace stratalloc {

namespace {

// Integer-valued quantities computed through floating point are snapped with
// this slack before floor/ceil.
constexpr double kIntegerSlack = 1e-9;

double snap_floor(double x) { return std::floor(x + kIntegerSlack * std::max(1.0, std::fabs(x))); }
double snap_ceil(double x) { return std::ceil(x - kIntegerSlack * std::max(1.0, std::fabs(x))); }

}  // namespace

std::string_view to_string(EvaluationMode mode) {
  return mode == EvaluationMode::Parity ? "parity" : "oracle";
}

EvaluationMode parse_mode(std::string_view text) {
  if (text == "parity") return EvaluationMode::Parity;
  if (text == "oracle") return EvaluationMode::Oracle;
  throw InvalidInput("unknown evaluation mode '" + std::string(text) + "' (expected parity|oracle)");
}

StratifiedPopulation StratifiedPopulation::from_counts(std::int64_t size, std::int64_t stratum1) {
  if (size < 4) throw InvalidInput("population size must be at least 4, got " + std::to_string(size));
  if (stratum1 < 2 || size - stratum1 < 2) {
    throw InvalidInput("each stratum needs at least 2 units (N=" + std::to_string(size) +
                       ", N1=" + std::to_string(stratum1) + ")");
  }
  return StratifiedPopulation(size, stratum1);
}

StratifiedPopulation StratifiedPopulation::from_weight(std::int64_t size, double w1) {
  if (!(w1 > 0.0 && w1 < 1.0)) throw InvalidInput("stratum weight must lie in (0, 1)");
  const double exact = w1 * static_cast<double>(size);
  const double rounded = std::round(exact);
  if (std::fabs(exact - rounded) > 1e-9) {
    throw InvalidInput("w1 * N = " + std::to_string(exact) + " is not an integer stratum size");
  }
  return from_counts(size, static_cast<std::int64_t>(rounded));
}

CanonicalProblem canonicalize(const StratifiedPopulation& population, const CostBudget& budget) {
  // Equal strata: put the cheaper stratum first so relabeling is a no-op.
  const bool tie = population.size1() == population.size2();
  if (tie ? budget.c1 <= budget.c2 : population.is_canonical()) return {population, budget, false};
  return {population.swapped(), budget.swapped(), true};
}

FeasibleRange validate_budget(const StratifiedPopulation& population, const CostBudget& budget) {
  const auto [c1, c2, total] = budget;
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(total > 0.0) || !std::isfinite(c1) || !std::isfinite(c2) ||
      !std::isfinite(total)) {
    throw InvalidInput("costs and budget must be positive finite numbers");
  }
  const double n1_units = static_cast<double>(population.size1());
  const double n2_units = static_cast<double>(population.size2());
  if (!(c1 * n1_units + c2 * n2_units > total)) {
    throw InvalidInput("budget covers a full census (c1*N1 + c2*N2 <= C); nothing to allocate");
  }
  if (total < c1 + c2) {
    throw InfeasibleBudget("budget cannot buy one unit in each stratum (C < c1 + c2)");
  }

  FeasibleRange range;
  range.lower = std::max(1.0, (total - c2 * n2_units) / c1);
  range.upper = std::min({total / c1, n1_units, (total - c2) / c1});
  range.first = static_cast<std::int64_t>(snap_ceil(range.lower));
  range.last = static_cast<std::int64_t>(snap_floor(range.upper));
  if (range.lower > range.upper || range.first > range.last) {
    throw InfeasibleBudget("no integer n1 satisfies 1 <= n1 <= N1 and 1 <= n2 <= N2 within budget");
  }
  return range;
}

double implied_n2(const CostBudget& budget, double n1, EvaluationMode mode) {
  const double n2 = (budget.total - budget.c1 * n1) / budget.c2;
  return mode == EvaluationMode::Parity ? n2 : snap_floor(n2);
}

std::int64_t affordable_n2(const CostBudget& budget, std::int64_t n1) {
  return static_cast<std::int64_t>(
      snap_floor((budget.total - budget.c1 * static_cast<double>(n1)) / budget.c2));
}

}  // namespace stratalloc
