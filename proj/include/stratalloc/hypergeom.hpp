#pragma once

#include <cstdint>
#include <vector>

#include "stratalloc/random.hpp"

namespace stratalloc {

/// Number of successes in `draws` draws without replacement from a population
/// of `population` units containing `successes` successes.
struct HypergeomParams {
  std::int64_t population = 0;
  std::int64_t successes = 0;
  std::int64_t draws = 0;

  std::int64_t support_min() const;
  std::int64_t support_max() const;
};

/// Validating constructor; throws InvalidInput unless 0 <= K, n <= N.
HypergeomParams make_hypergeom(std::int64_t population, std::int64_t successes, std::int64_t draws);

/// Probability of exactly x successes. Exactly 0 outside the support.
double pmf(const HypergeomParams& p, std::int64_t x);

/// Probabilities over the whole support, index 0 at support_min().
std::vector<double> pmf_table(const HypergeomParams& p);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Closed-form mean n K / N and variance n (K/N)(1 - K/N)(N - n)/(N - 1).
Moments moments(const HypergeomParams& p);

/// Inverse-CDF sampler over a precomputed cumulative table.
class HypergeomSampler {
 public:
  explicit HypergeomSampler(const HypergeomParams& p);

  std::int64_t operator()(SplitMix64& rng) const { return from_uniform(rng.uniform()); }
  std::int64_t from_uniform(double u) const;

  const HypergeomParams& params() const { return params_; }

 private:
  HypergeomParams params_;
  std::vector<double> cdf_;
};

/// One draw. Builds a sampler per call; reuse HypergeomSampler in loops.
std::int64_t sample(const HypergeomParams& p, SplitMix64& rng);

}  // namespace stratalloc
