#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stratalloc/errors.hpp"
#include "stratalloc/hypergeom.hpp"

using namespace stratalloc;

TEST_CASE("pmf examples") {
  CHECK(pmf(make_hypergeom(10, 5, 4), 2) == doctest::Approx(100.0 / 210.0).epsilon(1e-14));
  CHECK(pmf(make_hypergeom(10, 10, 4), 4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pmf(make_hypergeom(10, 5, 4), 6) == 0.0);
  CHECK(pmf(make_hypergeom(10, 5, 4), -1) == 0.0);
  CHECK_THROWS_AS(make_hypergeom(10, 11, 4), InvalidInput);
  CHECK_THROWS_AS(make_hypergeom(10, 5, -1), InvalidInput);
}

TEST_CASE("pmf against binomial ratios, all N <= 200") {
  const oracle::Pascal binom(200);
  double worst_pmf = 0.0;
  double worst_sum = 0.0;
  double worst_moment = 0.0;
  double worst_symmetry = 0.0;
  bool table_matches = true;
  for (std::int64_t big_n = 1; big_n <= 200; ++big_n) {
    for (std::int64_t big_k = 0; big_k <= big_n; ++big_k) {
      for (std::int64_t n = 0; n <= big_n; ++n) {
        const auto p = make_hypergeom(big_n, big_k, n);
        const auto table = pmf_table(p);
        const auto mirrored = pmf_table(make_hypergeom(big_n, n, big_k));
        REQUIRE(table.size() == static_cast<std::size_t>(p.support_max() - p.support_min() + 1));
        REQUIRE(mirrored.size() == table.size());
        long double total = 0.0L;
        long double mean = 0.0L;
        for (std::size_t i = 0; i < table.size(); ++i) {
          const auto x = p.support_min() + static_cast<std::int64_t>(i);
          const auto expected = static_cast<double>(oracle::hypergeom_pmf(binom, big_n, big_k, n, x));
          worst_pmf = std::max(worst_pmf, oracle::relative_difference(expected, table[i]));
          worst_symmetry = std::max(worst_symmetry, std::fabs(table[i] - mirrored[i]));
          total += table[i];
          mean += table[i] * static_cast<long double>(x);
        }
        long double var = 0.0L;
        for (std::size_t i = 0; i < table.size(); ++i) {
          const long double d = static_cast<long double>(p.support_min() + static_cast<std::int64_t>(i)) - mean;
          var += table[i] * d * d;
        }
        if ((big_n + big_k + n) % 17 == 0) {
          for (std::size_t i = 0; i < table.size(); ++i) {
            table_matches = table_matches && pmf(p, p.support_min() + static_cast<std::int64_t>(i)) == table[i];
          }
        }
        worst_sum = std::max(worst_sum, std::fabs(static_cast<double>(total) - 1.0));
        const auto m = moments(p);
        worst_moment = std::max(worst_moment, oracle::relative_difference(m.mean, static_cast<double>(mean), 1e-12));
        worst_moment =
            std::max(worst_moment, oracle::relative_difference(m.variance, static_cast<double>(var), 1e-12));
      }
    }
  }
  CHECK(table_matches);
  CHECK(worst_pmf <= 1e-12);
  CHECK(worst_sum <= 1e-12);
  CHECK(worst_moment <= 1e-10);
  CHECK(worst_symmetry <= 1e-12);
}

TEST_CASE("large population stays normalised") {
  const auto p = make_hypergeom(30000, 15000, 480);
  double total = 0.0;
  for (const double v : pmf_table(p)) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const auto m = moments(p);
  CHECK(m.mean == doctest::Approx(240.0));
  CHECK(m.variance / (480.0 * 480.0) == doctest::Approx(0.000512517).epsilon(1e-6));
}

TEST_CASE("moments edge cases") {
  CHECK(moments(make_hypergeom(50, 20, 50)).variance == 0.0);
  const auto none = moments(make_hypergeom(50, 0, 10));
  CHECK(none.mean == 0.0);
  CHECK(none.variance == 0.0);
}

TEST_CASE("sampler") {
  SplitMix64 rng(7);
  const HypergeomSampler all(make_hypergeom(10, 10, 4));
  const HypergeomSampler none(make_hypergeom(10, 0, 4));
  for (int i = 0; i < 1000; ++i) {
    CHECK(all(rng) == 4);
    CHECK(none(rng) == 0);
  }

  SUBCASE("inverse cdf brackets u") {
    const auto p = make_hypergeom(60, 25, 18);
    const HypergeomSampler s(p);
    for (int i = 0; i <= 1000; ++i) {
      const double u = std::nextafter(static_cast<double>(i) / 1000.0, 0.0);
      const auto x = s.from_uniform(u < 0 ? 0.0 : u);
      double below = 0.0;
      for (auto k = p.support_min(); k < x; ++k) below += pmf(p, k);
      CHECK(x >= p.support_min());
      CHECK(x <= p.support_max());
      CHECK(below <= u + 1e-12);
      CHECK(below + pmf(p, x) >= u - 1e-12);
    }
  }

  SUBCASE("monte carlo mean") {
    const auto p = make_hypergeom(100, 30, 20);
    const HypergeomSampler s(p);
    const int draws = 100000;
    double sum = 0.0;
    double squares = 0.0;
    SplitMix64 r(2024);
    for (int i = 0; i < draws; ++i) {
      const auto x = static_cast<double>(s(r));
      sum += x;
      squares += x * x;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt((squares - draws * mean * mean) / (draws - 1));
    CHECK(std::fabs(mean - 6.0) <= 4.0 * sd / std::sqrt(static_cast<double>(draws)));
  }

  SUBCASE("sample helper matches the sampler") {
    const auto p = make_hypergeom(40, 15, 12);
    SplitMix64 a(99);
    SplitMix64 b(99);
    const HypergeomSampler s(p);
    for (int i = 0; i < 50; ++i) CHECK(sample(p, a) == s(b));
  }
}

TEST_CASE("splitmix streams") {
  SplitMix64 a = SplitMix64::for_stream(42, 0);
  SplitMix64 b = SplitMix64::for_stream(42, 0);
  SplitMix64 c = SplitMix64::for_stream(42, 1);
  const auto first = a();
  CHECK(first == b());
  CHECK(first != c());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
