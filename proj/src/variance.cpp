#include "stratalloc/variance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratalloc/errors.hpp"

namespace stratalloc {

namespace {

struct StratumTerms {
  double a1;  // (N1 - n1) / (n1 (N1 - 1))
  double a2;  // (N2 - n2) / (n2 (N2 - 1))
};

StratumTerms stratum_terms(const StratifiedPopulation& pop, SampleSizes s) {
  const double big1 = static_cast<double>(pop.size1());
  const double big2 = static_cast<double>(pop.size2());
  return {(big1 - s.n1) / (s.n1 * (big1 - 1.0)), (big2 - s.n2) / (s.n2 * (big2 - 1.0))};
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

NuisanceSet::NuisanceSet(const StratifiedPopulation& population, std::int64_t m)
    : m_(m), size1_(population.size1()), size2_(population.size2()) {
  if (m < 0 || m > population.size()) {
    throw InvalidInput("lattice index m=" + std::to_string(m) + " outside [0, N]");
  }
  first_ = std::max<std::int64_t>(0, m - size2_);
  last_ = std::min(size1_, m);
}

std::vector<double> NuisanceSet::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cardinality()));
  for (auto m1 = first_; m1 <= last_; ++m1) out.push_back(static_cast<double>(m1) / static_cast<double>(size1_));
  return out;
}

std::int64_t lattice_index(const StratifiedPopulation& population, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidInput("theta must lie in [0, 1]");
  const double scaled = theta * static_cast<double>(population.size());
  const double m = std::round(scaled);
  if (std::fabs(scaled - m) > 1e-9) {
    throw InvalidInput("theta=" + std::to_string(theta) + " is not a multiple of 1/N");
  }
  return static_cast<std::int64_t>(m);
}

NuisanceSet nuisance_set(const StratifiedPopulation& population, std::int64_t m) {
  return NuisanceSet(population, m);
}

NuisanceSet nuisance_set(const StratifiedPopulation& population, double theta) {
  return NuisanceSet(population, lattice_index(population, theta));
}

double variance_known_thetas(const StratifiedPopulation& population, SampleSizes sizes, double theta1,
                             double theta2) {
  const auto [a1, a2] = stratum_terms(population, sizes);
  const double w1 = population.w1();
  const double w2 = population.w2();
  return w1 * w1 * theta1 * (1.0 - theta1) * a1 + w2 * w2 * theta2 * (1.0 - theta2) * a2;
}

double averaged_variance_exact(const StratifiedPopulation& population, const Allocation& allocation,
                               std::int64_t m) {
  const NuisanceSet set(population, m);
  const SampleSizes sizes = to_sizes(allocation);
  const double big1 = static_cast<double>(population.size1());
  CompensatedSum sum;
  for (auto m1 = set.first_count(); m1 <= set.last_count(); ++m1) {
    sum.add(variance_known_thetas(population, sizes, static_cast<double>(m1) / big1, set.theta2_for(m1)));
  }
  return sum.value() / static_cast<double>(set.cardinality());
}

double left_region_variance(const StratifiedPopulation& population, SampleSizes sizes, double theta) {
  const auto [a1, a2] = stratum_terms(population, sizes);
  const double big_n = static_cast<double>(population.size());
  const double big1 = static_cast<double>(population.size1());
  const double big2 = static_cast<double>(population.size2());
  const double linear = (3.0 * big1 - 1.0) * a1 + (3.0 * big2 - 1.0) * a2;
  return theta / (6.0 * big_n) * (linear - 2.0 * big_n * (a1 + a2) * theta);
}

double middle_region_variance(const StratifiedPopulation& population, SampleSizes sizes, double theta) {
  const double big_n = static_cast<double>(population.size());
  const double big1 = static_cast<double>(population.size1());
  const double big2 = static_cast<double>(population.size2());
  const double w1 = population.w1();
  const auto [n1, n2] = sizes;
  const double offset = (2.0 * n1 * n2 * w1 * (big_n + 1.0) + big1 * big2 * ((n1 + n2) * w1 - 3.0 * n1) -
                         big1 * (n2 * w1 + n1 * (1.0 - w1))) /
                        (6.0 * big_n * n1 * n2 * (big2 - 1.0));
  return offset + (big2 - n2) / n2 * theta * (1.0 - theta) / (big2 - 1.0);
}

double averaged_variance_closed(const StratifiedPopulation& population, SampleSizes sizes, double theta) {
  if (theta <= 0.0 || theta >= 1.0) return 0.0;
  // For θ in [1/2, 1) the subtraction is exact, so mirrored inputs agree.
  const double folded = theta > 0.5 ? 1.0 - theta : theta;
  if (folded < population.w1()) return left_region_variance(population, sizes, folded);
  return middle_region_variance(population, sizes, folded);
}

double averaged_variance_closed(const StratifiedPopulation& population, const CostBudget& budget, double n1,
                                double theta, EvaluationMode mode) {
  return averaged_variance_closed(population, SampleSizes{n1, implied_n2(budget, n1, mode)}, theta);
}

double classical_variance(std::int64_t population_size, double n, double theta) {
  const double big_n = static_cast<double>(population_size);
  return theta * (1.0 - theta) / n * (big_n - n) / (big_n - 1.0);
}

double theta_star(const StratifiedPopulation& population, SampleSizes sizes) {
  const auto [a1, a2] = stratum_terms(population, sizes);
  const double total = a1 + a2;
  if (total == 0.0) throw DegenerateAllocation("theta* undefined: both strata are fully sampled");
  const double big_n = static_cast<double>(population.size());
  const double big1 = static_cast<double>(population.size1());
  const double big2 = static_cast<double>(population.size2());
  return ((3.0 * big1 - 1.0) * a1 + (3.0 * big2 - 1.0) * a2) / (4.0 * big_n * total);
}

double vertex_variance(const StratifiedPopulation& population, SampleSizes sizes) {
  const auto [a1, a2] = stratum_terms(population, sizes);
  const double total = a1 + a2;
  if (total == 0.0) throw DegenerateAllocation("vertex variance undefined: both strata are fully sampled");
  const double big_n = static_cast<double>(population.size());
  const double linear = (3.0 * static_cast<double>(population.size1()) - 1.0) * a1 +
                        (3.0 * static_cast<double>(population.size2()) - 1.0) * a2;
  return linear * linear / (48.0 * big_n * big_n * total);
}

double half_variance_printed(const StratifiedPopulation& population, SampleSizes sizes) {
  const double big_n = static_cast<double>(population.size());
  const double big1 = static_cast<double>(population.size1());
  const double big2 = static_cast<double>(population.size2());
  const auto [n1, n2] = sizes;
  return (big1 * (big1 - n1) / n1 +
          (3.0 * big2 * big2 - (big1 + 1.0) * (big1 + 1.0) + 1.0) / (2.0 * big1) * (big2 - n2) / n2) /
         (6.0 * big_n * big_n);
}

std::string_view to_string(Regime regime) {
  return regime == Regime::AtHalf ? "at-half" : "at-theta-star";
}

namespace {

MaxVarianceResult continuous_max(const StratifiedPopulation& pop, SampleSizes sizes) {
  const double w1 = pop.w1();
  MaxVarianceResult best{0.5, averaged_variance_closed(pop, sizes, 0.5), Regime::AtHalf};

  const double star = theta_star(pop, sizes);
  if (star > 0.0 && star < w1) {
    const double value = averaged_variance_closed(pop, sizes, star);
    if (value > best.value) best = {star, value, Regime::AtThetaStar};
  }
  // θ* clamped to the region edge; never beats θ = 1/2 analytically but is
  // kept so the candidate set covers the whole left piece.
  const double edge = averaged_variance_closed(pop, sizes, w1);
  if (edge > best.value) best = {w1, edge, Regime::AtThetaStar};
  return best;
}

MaxVarianceResult lattice_max(const StratifiedPopulation& pop, SampleSizes sizes) {
  const auto big_n = pop.size();
  const auto big1 = pop.size1();
  const auto big2 = pop.size2();
  const double scale = static_cast<double>(big_n);

  auto value_at = [&](std::int64_t m) { return averaged_variance_closed(pop, sizes, static_cast<double>(m) / scale); };

  MaxVarianceResult best{0.0, -1.0, Regime::AtHalf};
  // Middle piece: m in [N1, N2], vertex at N/2.
  for (std::int64_t m : {big_n / 2, (big_n + 1) / 2}) {
    const auto clamped = std::clamp(m, big1, big2);
    const double value = value_at(clamped);
    if (value > best.value) best = {static_cast<double>(clamped) / scale, value, Regime::AtHalf};
  }
  // Left piece: m in [1, N1 - 1], vertex at θ* N.
  if (big1 >= 2) {
    const double vertex = theta_star(pop, sizes) * scale;
    const double lo = std::floor(vertex);
    for (double m : {lo, lo + 1.0}) {
      const auto clamped = static_cast<std::int64_t>(std::clamp(m, 1.0, static_cast<double>(big1 - 1)));
      const double value = value_at(clamped);
      if (value > best.value) best = {static_cast<double>(clamped) / scale, value, Regime::AtThetaStar};
    }
  }
  return best;
}

}  // namespace

MaxVarianceResult max_variance(const StratifiedPopulation& population, SampleSizes sizes, ThetaDomain domain) {
  return domain == ThetaDomain::Continuous ? continuous_max(population, sizes) : lattice_max(population, sizes);
}

MaxVarianceResult max_variance(const StratifiedPopulation& population, const CostBudget& budget, double n1,
                               EvaluationMode mode) {
  const SampleSizes sizes{n1, implied_n2(budget, n1, mode)};
  return max_variance(population, sizes,
                      mode == EvaluationMode::Parity ? ThetaDomain::Continuous : ThetaDomain::Lattice);
}

double classical_max_variance(const StratifiedPopulation& population, const CostBudget& budget) {
  const double big_n = static_cast<double>(population.size());
  const double census_cost = budget.c1 * static_cast<double>(population.size1()) +
                             budget.c2 * static_cast<double>(population.size2());
  return census_cost / (4.0 * budget.total * (big_n - 1.0)) - 1.0 / (4.0 * (big_n - 1.0));
}

double classical_max_variance_at(std::int64_t population_size, std::int64_t n) {
  const double big_n = static_cast<double>(population_size);
  const double size = static_cast<double>(n);
  return (big_n - size) / (4.0 * (big_n - 1.0) * size);
}

}  // namespace stratalloc
