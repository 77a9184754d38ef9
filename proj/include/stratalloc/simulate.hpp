#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stratalloc/population.hpp"

namespace stratalloc {

enum class SimulationMode { KnownThetas, AveragedNuisance, ClassicalSrs };

std::string_view to_string(SimulationMode mode);
SimulationMode parse_simulation_mode(std::string_view text);

struct SimulationConfig {
  std::int64_t replications = 100000;
  std::uint64_t seed = 0;
  SimulationMode mode = SimulationMode::KnownThetas;
  /// Worker threads. Results do not depend on this value.
  unsigned threads = 1;
};

struct SimulationSummary {
  SimulationMode mode = SimulationMode::KnownThetas;
  std::int64_t replications = 0;
  double estimator_mean = 0.0;
  double estimator_variance = 0.0;  ///< sample variance, divisor R - 1
  double standard_error_mean = 0.0;
  /// Pooled variance within groups sharing the same sampled θ1.
  std::optional<double> within_variance;
  std::optional<double> expected_cost_empirical;
  std::optional<double> cost_standard_error;

  double target_mean = 0.0;
  double target_variance = 0.0;
  std::optional<double> target_cost;
};

/// One statistical acceptance band.
struct BandCheck {
  std::string name;
  double observed = 0.0;
  double target = 0.0;
  double allowed = 0.0;  ///< maximal |observed - target|
  bool pass = false;
};

/// Mean within 4 standard errors, variance within 5% relative, mean cost
/// within 4 standard errors. The variance band uses the within-θ1 component
/// when one was recorded.
std::vector<BandCheck> check_bands(const SimulationSummary& summary);

/// Independent hypergeometric draws in both strata for fixed θ1, θ2; θk Nk
/// must be integers.
SimulationSummary simulate_stratified(const StratifiedPopulation& population, const Allocation& allocation,
                                      double theta1, double theta2, const SimulationConfig& config);

/// Each replication draws θ1 uniformly from the nuisance set of θ = m/N, then
/// one stratified sample. The within-θ1 variance targets the averaged variance.
SimulationSummary simulate_averaged(const StratifiedPopulation& population, const Allocation& allocation,
                                    std::int64_t m, const SimulationConfig& config);

/// Simple random sample of size floor(n_c) from the unstratified population:
/// stratum-1 count η1 drives the cost, the success count drives the estimator.
SimulationSummary simulate_classical(const StratifiedPopulation& population, const CostBudget& budget,
                                     std::int64_t m, const SimulationConfig& config);

}  // namespace stratalloc
