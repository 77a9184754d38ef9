#include "stratalloc/hypergeom.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "stratalloc/errors.hpp"

namespace stratalloc {

namespace {

// Below this size log-factorials come from a table built once in extended
// precision; above it lgammal is called directly.
constexpr std::int64_t kTableLimit = 2000;

const std::array<long double, kTableLimit + 1>& log_factorial_table() {
  static const auto table = [] {
    std::array<long double, kTableLimit + 1> t{};
    for (std::int64_t k = 0; k <= kTableLimit; ++k) t[k] = std::lgamma(static_cast<long double>(k) + 1.0L);
    return t;
  }();
  return table;
}

long double log_factorial(std::int64_t k) {
  if (k <= kTableLimit) return log_factorial_table()[static_cast<std::size_t>(k)];
  return std::lgamma(static_cast<long double>(k) + 1.0L);
}

long double log_choose(std::int64_t n, std::int64_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace

std::int64_t HypergeomParams::support_min() const {
  return std::max<std::int64_t>(0, draws - (population - successes));
}

std::int64_t HypergeomParams::support_max() const { return std::min(draws, successes); }

HypergeomParams make_hypergeom(std::int64_t population, std::int64_t successes, std::int64_t draws) {
  if (population < 1) throw InvalidInput("hypergeometric population must be positive");
  if (successes < 0 || successes > population) throw InvalidInput("success count outside [0, N]");
  if (draws < 0 || draws > population) throw InvalidInput("draw count outside [0, N]");
  return {population, successes, draws};
}

double pmf(const HypergeomParams& p, std::int64_t x) {
  if (x < p.support_min() || x > p.support_max()) return 0.0;
  const long double log_p = log_choose(p.successes, x) +
                            log_choose(p.population - p.successes, p.draws - x) -
                            log_choose(p.population, p.draws);
  return static_cast<double>(std::exp(log_p));
}

std::vector<double> pmf_table(const HypergeomParams& p) {
  std::vector<double> table;
  table.reserve(static_cast<std::size_t>(p.support_max() - p.support_min() + 1));
  for (auto x = p.support_min(); x <= p.support_max(); ++x) table.push_back(pmf(p, x));
  return table;
}

Moments moments(const HypergeomParams& p) {
  const double n = static_cast<double>(p.draws);
  const double big_n = static_cast<double>(p.population);
  const double share = static_cast<double>(p.successes) / big_n;
  Moments m;
  m.mean = n * share;
  m.variance = p.population > 1 ? n * share * (1.0 - share) * (big_n - n) / (big_n - 1.0) : 0.0;
  return m;
}

HypergeomSampler::HypergeomSampler(const HypergeomParams& p) : params_(p) {
  const auto probabilities = pmf_table(p);
  cdf_.reserve(probabilities.size());
  long double running = 0.0L;
  for (double q : probabilities) {
    running += q;
    cdf_.push_back(static_cast<double>(running));
  }
}

std::int64_t HypergeomSampler::from_uniform(double u) const {
  // First support point whose cumulative mass exceeds u; rounding shortfall in
  // the last cell maps to the upper end of the support.
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto index = std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1);
  return params_.support_min() + index;
}

std::int64_t sample(const HypergeomParams& p, SplitMix64& rng) { return HypergeomSampler(p)(rng); }

}  // namespace stratalloc
