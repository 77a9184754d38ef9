#include "stratalloc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "stratalloc/allocation.hpp"
#include "stratalloc/errors.hpp"
#include "stratalloc/hypergeom.hpp"
#include "stratalloc/random.hpp"
#include "stratalloc/variance.hpp"

namespace stratalloc {

namespace {

struct Draw {
  double estimate = 0.0;
  double cost = 0.0;
  std::int64_t group = 0;
};

// Runs `draw(rng)` once per replication on stream i of the seed. Workers take
// contiguous index blocks; the caller reduces in index order.
template <class DrawFn>
std::vector<Draw> run_replications(const SimulationConfig& config, const DrawFn& draw) {
  if (config.replications < 1) throw InvalidInput("replications must be positive");
  const auto count = static_cast<std::size_t>(config.replications);
  std::vector<Draw> out(count);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = SplitMix64::for_stream(config.seed, i);
      out[i] = draw(rng);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, count);
  if (workers == 1) {
    work(0, count);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t begin = 0; begin < count; begin += block) {
      pool.emplace_back(work, begin, std::min(count, begin + block));
    }
  }
  return out;
}

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;
};

MeanVar mean_var(const std::vector<Draw>& draws, double Draw::*field) {
  long double sum = 0.0L;
  for (const auto& d : draws) sum += d.*field;
  const long double mean = sum / static_cast<long double>(draws.size());
  long double squares = 0.0L;
  for (const auto& d : draws) {
    const long double dev = d.*field - mean;
    squares += dev * dev;
  }
  const auto n = static_cast<long double>(draws.size());
  return {static_cast<double>(mean), draws.size() > 1 ? static_cast<double>(squares / (n - 1.0L)) : 0.0};
}

SimulationSummary summarize(const std::vector<Draw>& draws, SimulationMode mode) {
  SimulationSummary s;
  s.mode = mode;
  s.replications = static_cast<std::int64_t>(draws.size());
  const auto estimate = mean_var(draws, &Draw::estimate);
  s.estimator_mean = estimate.mean;
  s.estimator_variance = estimate.variance;
  s.standard_error_mean = std::sqrt(estimate.variance / static_cast<double>(draws.size()));
  return s;
}

void require_integral(double count, const char* what) {
  if (std::fabs(count - std::round(count)) > 1e-9) {
    throw InvalidInput(std::string(what) + " must be an integer count of units");
  }
}

void require_allocation(const StratifiedPopulation& pop, const Allocation& a) {
  if (a.n1 < 1 || a.n1 > pop.size1() || a.n2 < 1 || a.n2 > pop.size2()) {
    throw InvalidInput("allocation must satisfy 1 <= n_k <= N_k");
  }
}

}  // namespace

std::string_view to_string(SimulationMode mode) {
  switch (mode) {
    case SimulationMode::KnownThetas:
      return "known-thetas";
    case SimulationMode::AveragedNuisance:
      return "averaged-nuisance";
    case SimulationMode::ClassicalSrs:
      return "classical-srs";
  }
  return "unknown";
}

SimulationMode parse_simulation_mode(std::string_view text) {
  if (text == "known-thetas") return SimulationMode::KnownThetas;
  if (text == "averaged-nuisance") return SimulationMode::AveragedNuisance;
  if (text == "classical-srs") return SimulationMode::ClassicalSrs;
  throw InvalidInput("unknown simulation mode '" + std::string(text) + "'");
}

std::vector<BandCheck> check_bands(const SimulationSummary& s) {
  std::vector<BandCheck> checks;
  auto within = [](double observed, double target, double allowed) {
    return std::fabs(observed - target) <= allowed;
  };

  const double mean_allowed = s.standard_error_mean > 0.0 ? 4.0 * s.standard_error_mean : 1e-12;
  checks.push_back({"mean", s.estimator_mean, s.target_mean, mean_allowed,
                    within(s.estimator_mean, s.target_mean, mean_allowed)});

  const double variance = s.within_variance.value_or(s.estimator_variance);
  const double variance_allowed = s.target_variance > 0.0 ? 0.05 * s.target_variance : 1e-15;
  checks.push_back({s.within_variance ? "within-variance" : "variance", variance, s.target_variance,
                    variance_allowed, within(variance, s.target_variance, variance_allowed)});

  if (s.expected_cost_empirical && s.target_cost) {
    const double se = s.cost_standard_error.value_or(0.0);
    const double allowed = se > 0.0 ? 4.0 * se : 1e-9 * std::fabs(*s.target_cost);
    checks.push_back({"cost", *s.expected_cost_empirical, *s.target_cost, allowed,
                      within(*s.expected_cost_empirical, *s.target_cost, allowed)});
  }
  return checks;
}

SimulationSummary simulate_stratified(const StratifiedPopulation& population, const Allocation& allocation,
                                      double theta1, double theta2, const SimulationConfig& config) {
  require_allocation(population, allocation);
  const double count1 = theta1 * static_cast<double>(population.size1());
  const double count2 = theta2 * static_cast<double>(population.size2());
  require_integral(count1, "theta1 * N1");
  require_integral(count2, "theta2 * N2");

  const HypergeomSampler first(make_hypergeom(population.size1(), std::llround(count1), allocation.n1));
  const HypergeomSampler second(make_hypergeom(population.size2(), std::llround(count2), allocation.n2));
  const double scale1 = population.w1() / static_cast<double>(allocation.n1);
  const double scale2 = population.w2() / static_cast<double>(allocation.n2);

  const auto draws = run_replications(config, [&](SplitMix64& rng) {
    const auto x1 = first(rng);
    const auto x2 = second(rng);
    return Draw{scale1 * static_cast<double>(x1) + scale2 * static_cast<double>(x2), 0.0, 0};
  });

  auto s = summarize(draws, SimulationMode::KnownThetas);
  s.target_mean = population.w1() * theta1 + population.w2() * theta2;
  s.target_variance = variance_known_thetas(population, to_sizes(allocation), theta1, theta2);
  return s;
}

SimulationSummary simulate_averaged(const StratifiedPopulation& population, const Allocation& allocation,
                                    std::int64_t m, const SimulationConfig& config) {
  require_allocation(population, allocation);
  const NuisanceSet set(population, m);

  std::vector<HypergeomSampler> first;
  std::vector<HypergeomSampler> second;
  for (auto m1 = set.first_count(); m1 <= set.last_count(); ++m1) {
    first.emplace_back(make_hypergeom(population.size1(), m1, allocation.n1));
    second.emplace_back(make_hypergeom(population.size2(), m - m1, allocation.n2));
  }
  const double scale1 = population.w1() / static_cast<double>(allocation.n1);
  const double scale2 = population.w2() / static_cast<double>(allocation.n2);
  const auto groups = static_cast<std::int64_t>(first.size());

  const auto draws = run_replications(config, [&](SplitMix64& rng) {
    const auto group = std::min(groups - 1, static_cast<std::int64_t>(rng.uniform() * static_cast<double>(groups)));
    const auto g = static_cast<std::size_t>(group);
    const auto x1 = first[g](rng);
    const auto x2 = second[g](rng);
    return Draw{scale1 * static_cast<double>(x1) + scale2 * static_cast<double>(x2), 0.0, group};
  });

  auto s = summarize(draws, SimulationMode::AveragedNuisance);

  std::vector<long double> sums(first.size(), 0.0L);
  std::vector<std::int64_t> counts(first.size(), 0);
  for (const auto& d : draws) {
    sums[static_cast<std::size_t>(d.group)] += d.estimate;
    ++counts[static_cast<std::size_t>(d.group)];
  }
  long double within = 0.0L;
  std::int64_t occupied = 0;
  for (const auto& d : draws) {
    const auto g = static_cast<std::size_t>(d.group);
    const long double dev = d.estimate - sums[g] / static_cast<long double>(counts[g]);
    within += dev * dev;
  }
  for (auto c : counts) occupied += c > 0 ? 1 : 0;
  const auto dof = s.replications - occupied;
  s.within_variance = dof > 0 ? static_cast<double>(within / static_cast<long double>(dof)) : 0.0;

  s.target_mean = static_cast<double>(m) / static_cast<double>(population.size());
  s.target_variance = averaged_variance_exact(population, allocation, m);
  return s;
}

SimulationSummary simulate_classical(const StratifiedPopulation& population, const CostBudget& budget,
                                     std::int64_t m, const SimulationConfig& config) {
  if (m < 0 || m > population.size()) throw InvalidInput("lattice index m outside [0, N]");
  const auto n = classical_sample_size(population, budget).integer;
  if (n < 1 || n > population.size()) throw InvalidInput("classical sample size outside [1, N]");

  const HypergeomSampler stratum_count(make_hypergeom(population.size(), population.size1(), n));
  const HypergeomSampler successes(make_hypergeom(population.size(), m, n));
  const double size = static_cast<double>(n);

  const auto draws = run_replications(config, [&](SplitMix64& rng) {
    const auto eta1 = static_cast<double>(stratum_count(rng));
    const auto xi = static_cast<double>(successes(rng));
    return Draw{xi / size, budget.c1 * eta1 + budget.c2 * (size - eta1), 0};
  });

  auto s = summarize(draws, SimulationMode::ClassicalSrs);
  const auto cost = mean_var(draws, &Draw::cost);
  s.expected_cost_empirical = cost.mean;
  s.cost_standard_error = std::sqrt(cost.variance / static_cast<double>(draws.size()));

  const double theta = static_cast<double>(m) / static_cast<double>(population.size());
  s.target_mean = theta;
  s.target_variance = classical_variance(population.size(), size, theta);
  s.target_cost = (population.w1() * budget.c1 + population.w2() * budget.c2) * size;
  return s;
}

}  // namespace stratalloc
