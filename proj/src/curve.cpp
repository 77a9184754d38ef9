#include <cmath>

#include "stratalloc/allocation.hpp"
#include "stratalloc/errors.hpp"
#include "stratalloc/variance.hpp"

namespace stratalloc {

VarianceCurve emit_curve(const StratifiedPopulation& population, const CostBudget& budget, double n1, double step,
                         EvaluationMode mode) {
  if (!(step > 0.0 && step <= 0.01)) throw InvalidInput("curve step must lie in (0, 0.01]");
  if (!population.is_canonical()) throw InvalidInput("emit_curve expects canonical strata (w1 <= w2)");
  validate_budget(population, budget);

  VarianceCurve curve{population, budget, n1, implied_n2(budget, n1, mode), 0, mode, {}};
  curve.classical_n = classical_sample_size(population, budget).integer;
  const SampleSizes sizes{curve.n1, curve.n2};
  const double classical_n = static_cast<double>(curve.classical_n);

  auto push = [&](double theta) {
    curve.points.push_back({theta, averaged_variance_closed(population, sizes, theta),
                            classical_variance(population.size(), classical_n, theta)});
  };
  for (std::int64_t k = 0;; ++k) {
    const double theta = static_cast<double>(k) * step;
    if (theta >= 1.0 - 1e-9) break;
    push(theta);
  }
  push(1.0);
  return curve;
}

}  // namespace stratalloc
