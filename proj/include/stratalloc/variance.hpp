#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "stratalloc/population.hpp"

namespace stratalloc {

/// Admissible stratum-1 proportions θ1 = M1/N1 for an overall θ = m/N.
///
/// Stored as the integer range of M1; every element pairs with the integer
/// stratum-2 count M2 = m - M1, so θ2 = M2/N2 is exact.
class NuisanceSet {
 public:
  NuisanceSet(const StratifiedPopulation& population, std::int64_t m);

  std::int64_t overall_count() const { return m_; }
  std::int64_t first_count() const { return first_; }
  std::int64_t last_count() const { return last_; }
  std::int64_t cardinality() const { return last_ - first_ + 1; }

  double a_theta() const { return static_cast<double>(first_) / static_cast<double>(size1_); }
  double b_theta() const { return static_cast<double>(last_) / static_cast<double>(size1_); }
  double step() const { return 1.0 / static_cast<double>(size1_); }

  /// θ1 values in ascending order.
  std::vector<double> values() const;
  /// θ2 = (θ - w1 θ1)/w2 for the stratum-1 count m1.
  double theta2_for(std::int64_t m1) const {
    return static_cast<double>(m_ - m1) / static_cast<double>(size2_);
  }

 private:
  std::int64_t m_;
  std::int64_t size1_;
  std::int64_t size2_;
  std::int64_t first_;
  std::int64_t last_;
};

/// θ = m/N. Throws InvalidInput unless 0 <= m <= N.
NuisanceSet nuisance_set(const StratifiedPopulation& population, std::int64_t m);
/// Same for a real θ; it must sit on the 1/N lattice to within 1e-9.
NuisanceSet nuisance_set(const StratifiedPopulation& population, double theta);

/// Lattice index m with θ = m/N, or InvalidInput when θ is off the lattice.
std::int64_t lattice_index(const StratifiedPopulation& population, double theta);

/// Variance of the stratified estimator for known stratum proportions.
double variance_known_thetas(const StratifiedPopulation& population, SampleSizes sizes, double theta1,
                             double theta2);

/// Stratified variance averaged over the nuisance set, by direct summation in
/// ascending θ1 with compensated accumulation. θ = m/N.
double averaged_variance_exact(const StratifiedPopulation& population, const Allocation& allocation,
                               std::int64_t m);

/// Quadratic that holds on 0 < θ < w1 (and, mirrored, on 1 - w1 < θ < 1).
double left_region_variance(const StratifiedPopulation& population, SampleSizes sizes, double theta);
/// Quadratic that holds on w1 <= θ <= 1 - w1.
double middle_region_variance(const StratifiedPopulation& population, SampleSizes sizes, double theta);

/// Piecewise closed form of the averaged variance. Expects a canonical
/// population. θ > 1/2 is folded to 1 - θ before evaluation, so D(θ) and
/// D(1 - θ) coincide bit for bit whenever 1 - θ is exact.
double averaged_variance_closed(const StratifiedPopulation& population, SampleSizes sizes, double theta);
/// Same with n2 taken from the budget identity under `mode`.
double averaged_variance_closed(const StratifiedPopulation& population, const CostBudget& budget, double n1,
                                double theta, EvaluationMode mode);

/// Variance θ(1 - θ)/n · (N - n)/(N - 1) of the unstratified estimator.
double classical_variance(std::int64_t population_size, double n, double theta);

/// Vertex of the left-region quadratic. Only a maximizer when it lies in
/// (0, w1); callers clamp. Throws DegenerateAllocation if both strata are
/// fully sampled.
double theta_star(const StratifiedPopulation& population, SampleSizes sizes);

/// Value of the left-region quadratic at its vertex, S^2 / (48 N^2 T).
double vertex_variance(const StratifiedPopulation& population, SampleSizes sizes);

/// Printed closed form for the variance at θ = 1/2, evaluated verbatim.
/// Audit use only; middle_region_variance(…, 0.5) is authoritative.
double half_variance_printed(const StratifiedPopulation& population, SampleSizes sizes);

enum class Regime { AtThetaStar, AtHalf };
std::string_view to_string(Regime regime);

struct MaxVarianceResult {
  double theta_tilde = 0.5;
  double value = 0.0;
  Regime regime = Regime::AtHalf;
};

/// Where θ may range when maximizing.
enum class ThetaDomain { Continuous, Lattice };

/// Worst-case averaged variance over θ.
///
/// Continuous: candidates are θ = 1/2, θ* when it falls in (0, w1), and the
/// region boundary w1. Lattice: the same pieces maximized over θ = m/N, which
/// reduces to the lattice points next to each vertex. Ties go to θ = 1/2.
MaxVarianceResult max_variance(const StratifiedPopulation& population, SampleSizes sizes,
                               ThetaDomain domain = ThetaDomain::Continuous);
MaxVarianceResult max_variance(const StratifiedPopulation& population, const CostBudget& budget, double n1,
                               EvaluationMode mode);

/// Worst-case classical variance with the expected sample size n_c kept real.
double classical_max_variance(const StratifiedPopulation& population, const CostBudget& budget);
/// Same at an integer sample size, (N - n)/(4 (N - 1) n).
double classical_max_variance_at(std::int64_t population_size, std::int64_t n);

struct CurvePoint {
  double theta = 0.0;
  double stratified = 0.0;
  double classical = 0.0;
};

struct VarianceCurve {
  StratifiedPopulation population;
  CostBudget budget;
  double n1 = 0.0;
  double n2 = 0.0;
  std::int64_t classical_n = 0;
  EvaluationMode mode = EvaluationMode::Parity;
  std::vector<CurvePoint> points;
};

/// Tabulates both variances over θ = 0, step, …, 1. Requires 0 < step <= 0.01
/// and a canonical population.
VarianceCurve emit_curve(const StratifiedPopulation& population, const CostBudget& budget, double n1, double step,
                         EvaluationMode mode = EvaluationMode::Parity);

}  // namespace stratalloc
