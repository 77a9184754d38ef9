#pragma once

#include <cmath>
#include <vector>

#include "stratalloc/population.hpp"
#include "stratalloc/random.hpp"

namespace oracle {

struct Config {
  stratalloc::StratifiedPopulation population;
  stratalloc::CostBudget budget;
};

/// Random desk-scale designs with w1 <= 1/2 and a budget strictly between one
/// unit per stratum and a census. Costs are multiples of 1/4.
inline std::vector<Config> random_configs(std::size_t count, std::uint64_t seed, std::int64_t max_size = 500) {
  stratalloc::SplitMix64 rng(seed);
  auto uniform_int = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
  };
  std::vector<Config> out;
  while (out.size() < count) {
    const auto size = uniform_int(20, max_size);
    const auto size1 = uniform_int(2, size / 2);
    const double c1 = 0.25 * static_cast<double>(uniform_int(2, 20));
    const double c2 = 0.25 * static_cast<double>(uniform_int(2, 20));
    const auto pop = stratalloc::StratifiedPopulation::from_counts(size, size1);
    const double census = c1 * static_cast<double>(size1) + c2 * static_cast<double>(size - size1);
    const double floor = 2.0 * (c1 + c2);
    const double total = std::round(floor + rng.uniform() * (census - floor));
    if (!(total > c1 + c2) || !(total < census)) continue;
    const stratalloc::CostBudget budget{c1, c2, total};
    try {
      stratalloc::validate_budget(pop, budget);
    } catch (const std::exception&) {
      continue;
    }
    out.push_back({pop, budget});
  }
  return out;
}

}  // namespace oracle
