#include "stratalloc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stratalloc/errors.hpp"
#include "stratalloc/search.hpp"

namespace stratalloc {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kSearchWidth = 0.1;

std::int64_t window_half_width(const CostBudget& budget) {
  return std::max<std::int64_t>(5, static_cast<std::int64_t>(std::ceil(budget.c2 / budget.c1)) + 1);
}

OptimizationResult finish(const StratifiedPopulation& pop, const CostBudget& budget, std::int64_t n1,
                          EvaluationMode mode) {
  OptimizationResult result;
  result.allocation = {n1, affordable_n2(budget, n1)};
  result.max = max_variance(pop, budget, static_cast<double>(n1), mode);
  return result;
}

}  // namespace

double allocation_objective(const StratifiedPopulation& population, const CostBudget& budget, double n1,
                            EvaluationMode mode) {
  const double n2 = implied_n2(budget, n1, mode);
  const double big1 = static_cast<double>(population.size1());
  const double big2 = static_cast<double>(population.size2());
  const double floor_size = mode == EvaluationMode::Parity ? 0.0 : 1.0;
  const bool n1_ok = mode == EvaluationMode::Parity ? n1 > 0.0 : n1 >= 1.0;
  const bool n2_ok = mode == EvaluationMode::Parity ? n2 > floor_size : n2 >= floor_size;
  if (!n1_ok || !n2_ok || n1 > big1 || n2 > big2) return kInfinity;
  return max_variance(population, budget, n1, mode).value;
}

OptimizationResult optimize_allocation(const StratifiedPopulation& population, const CostBudget& budget,
                                       EvaluationMode mode) {
  if (!population.is_canonical()) throw InvalidInput("optimize_allocation expects canonical strata (w1 <= w2)");
  const FeasibleRange range = validate_budget(population, budget);

  if (mode == EvaluationMode::Parity) {
    const double lower = std::max(1.0, range.lower);
    const double upper = std::min(budget.total / budget.c1, static_cast<double>(population.size1()));
    const auto search = golden_section_minimize(
        [&](double x) { return allocation_objective(population, budget, x, mode); }, lower, upper, kSearchWidth);
    const auto integer_part = static_cast<std::int64_t>(std::floor(search.midpoint()));
    auto result = finish(population, budget, std::clamp(integer_part, range.first, range.last), mode);
    result.search_midpoint = search.midpoint();
    result.search_n1 = integer_part;
    result.search_iterations = search.iterations;
    return result;
  }

  const auto search = golden_section_minimize(
      [&](double x) { return allocation_objective(population, budget, x, EvaluationMode::Parity); },
      range.lower, range.upper, kSearchWidth);
  const auto integer_part = static_cast<std::int64_t>(std::floor(search.midpoint()));

  auto objective = [&](std::int64_t n1) {
    return allocation_objective(population, budget, static_cast<double>(n1), mode);
  };
  const std::int64_t half_width = window_half_width(budget);
  std::int64_t incumbent = std::clamp(integer_part, range.first, range.last);
  double incumbent_value = objective(incumbent);
  int rounds = 0;
  for (;;) {
    std::int64_t best = incumbent;
    double best_value = incumbent_value;
    const auto lo = std::max(range.first, incumbent - half_width);
    const auto hi = std::min(range.last, incumbent + half_width);
    for (auto n1 = lo; n1 <= hi; ++n1) {
      const double value = objective(n1);
      if (value < best_value || (value == best_value && n1 < best)) {
        best = n1;
        best_value = value;
      }
    }
    if (best == incumbent) break;
    incumbent = best;
    incumbent_value = best_value;
    ++rounds;
  }

  auto result = finish(population, budget, incumbent, mode);
  result.search_midpoint = search.midpoint();
  result.search_n1 = integer_part;
  result.search_iterations = search.iterations;
  result.refinement_rounds = rounds;
  return result;
}

OptimizationResult exhaustive_allocation(const StratifiedPopulation& population, const CostBudget& budget,
                                         EvaluationMode mode) {
  if (!population.is_canonical()) throw InvalidInput("exhaustive_allocation expects canonical strata (w1 <= w2)");
  const FeasibleRange range = validate_budget(population, budget);
  std::int64_t best = range.first;
  double best_value = kInfinity;
  for (auto n1 = range.first; n1 <= range.last; ++n1) {
    const double value = allocation_objective(population, budget, static_cast<double>(n1), mode);
    if (value < best_value) {
      best = n1;
      best_value = value;
    }
  }
  auto result = finish(population, budget, best, mode);
  result.search_midpoint = static_cast<double>(best);
  result.search_n1 = best;
  return result;
}

double n1_closed_form(const StratifiedPopulation& population, const CostBudget& budget) {
  const double big_n = static_cast<double>(population.size());
  const double big2 = static_cast<double>(population.size2());
  const double w1 = population.w1();
  const double w2 = population.w2();
  const double radicand = budget.c1 * budget.c2 * w2 * (big_n * (w1 * w1 - 3.0 * w1 + 1.5) - w1);
  if (radicand < 0.0) throw InvalidInput("closed-form allocation undefined: negative radicand");
  const double head = std::sqrt(big2 - 1.0) * w1;
  return budget.total * head / (budget.c1 * head + std::sqrt(radicand));
}

LimitRatios audit_limits(std::int64_t population_size, double w1) {
  const double big_n = static_cast<double>(population_size);
  LimitRatios ratios;
  const double scaled = big_n * w1;
  ratios.at_zero = 8.0 * scaled * (scaled - 1.0) / ((3.0 * scaled - 1.0) * (3.0 * scaled - 1.0));
  const double rest = 3.0 * big_n * (1.0 - w1) - 1.0;
  ratios.at_full = 4.0 * (big_n * (1.0 - w1) - 1.0) * (big_n * (3.0 - 6.0 * w1 + 2.0 * w1 * w1) - 2.0 * w1) /
                   (rest * rest * w1);
  return ratios;
}

RootResult w1_star(std::int64_t population_size) {
  if (population_size < 4) throw InvalidInput("w1* needs N >= 4");
  return bisect_root([&](double w) { return audit_limits(population_size, w).at_full - 1.0; }, 1e-6, 0.5,
                     "w1* for N=" + std::to_string(population_size));
}

std::optional<double> regime_switch_w1(std::int64_t population_size, const CostBudget& budget) {
  for (std::int64_t size1 = 2; size1 <= population_size / 2; ++size1) {
    const auto pop = StratifiedPopulation::from_counts(population_size, size1);
    FeasibleRange range;
    try {
      range = validate_budget(pop, budget);
    } catch (const std::exception&) {
      continue;
    }
    const double n1 = range.upper;
    const auto max = max_variance(pop, budget, n1, EvaluationMode::Parity);
    if (max.regime == Regime::AtThetaStar) return pop.w1();
  }
  return std::nullopt;
}

RootResult n1_star(const StratifiedPopulation& population, const CostBudget& budget) {
  const FeasibleRange range = validate_budget(population, budget);
  const double w1 = population.w1();
  auto gap = [&](double n1) {
    const SampleSizes sizes{n1, implied_n2(budget, n1, EvaluationMode::Parity)};
    const double star = theta_star(population, sizes);
    const double left = (star > 0.0 && star < w1) ? vertex_variance(population, sizes)
                                                  : left_region_variance(population, sizes, w1);
    return left - middle_region_variance(population, sizes, 0.5);
  };
  return bisect_root(gap, range.lower, range.upper, "n1*");
}

ClassicalSampleSize classical_sample_size(const StratifiedPopulation& population, const CostBudget& budget) {
  ClassicalSampleSize size;
  size.real = budget.total / (population.w1() * budget.c1 + population.w2() * budget.c2);
  size.integer = static_cast<std::int64_t>(std::floor(size.real + 1e-9 * std::max(1.0, size.real)));
  return size;
}

NeymanAllocation neyman_allocation(const StratifiedPopulation& population, const CostBudget& budget,
                                   double theta1, double theta2) {
  if (!(theta1 > 0.0 && theta1 < 1.0) || !(theta2 > 0.0 && theta2 < 1.0)) {
    throw InvalidInput("Neyman allocation needs 0 < theta_k < 1 (zero stratum deviation)");
  }
  const double big1 = static_cast<double>(population.size1());
  const double big2 = static_cast<double>(population.size2());
  const double s1 = std::sqrt(theta1 * (1.0 - theta1));
  const double s2 = std::sqrt(theta2 * (1.0 - theta2));
  const double share1 = big1 * s1 / std::sqrt(budget.c1);
  const double share2 = big2 * s2 / std::sqrt(budget.c2);
  const double weighted = big1 * s1 * std::sqrt(budget.c1) + big2 * s2 * std::sqrt(budget.c2);
  NeymanAllocation out;
  out.n = budget.total * (share1 + share2) / weighted;
  out.n1 = out.n * share1 / (share1 + share2);
  out.n2 = out.n * share2 / (share1 + share2);
  return out;
}

double reduction_percent(double stratified, double classical) {
  if (classical == 0.0) throw InvalidInput("reduction undefined for zero classical variance");
  return (1.0 - stratified / classical) * 100.0;
}

}  // namespace stratalloc
