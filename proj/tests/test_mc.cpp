#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "strel/errors.hpp"
#include "strel/mc.hpp"
#include "strel/oracle.hpp"

using namespace strel;

TEST_CASE("mc_estimate trivial cases") {
  UncertainGraph g = test::make_graph(2, {{0, 1, 1.0}});
  RandomStream rng(1);
  CHECK(mc_estimate(g, 0, 0, 50, rng).value == 1.0);  // s == t
  CHECK(mc_estimate(g, 0, 1, 100, rng).value == 1.0); // certain edge
  CHECK(mc_estimate(g, 1, 0, 100, rng).value == 0.0); // no reverse edge
}

TEST_CASE("mc_estimate single edge confidence interval") {
  UncertainGraph g = test::make_graph(2, {{0, 1, 0.5}});
  RandomStream rng(42);
  Estimate est = mc_estimate(g, 0, 1, 10000, rng);
  CHECK(std::abs(est.value - 0.5) < 0.015);  // 3 sigma of Binomial(1e4, .5)/1e4
  CHECK(est.samples_used == 10000);
}

TEST_CASE("mc_estimate is deterministic given the stream seed") {
  UncertainGraph g = test::diamond();
  RandomStream a(7), b(7);
  CHECK(mc_estimate(g, 0, 3, 2000, a).value == mc_estimate(g, 0, 3, 2000, b).value);
}

TEST_CASE("early termination does not change round outcomes") {
  UncertainGraph g = test::random_graph(3, 7, 12, 0.2, 0.8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomStream a(seed), b(seed);
    Estimate with_stop = mc_estimate(g, 0, 6, 64, a, McOptions{true});
    Estimate without_stop = mc_estimate(g, 0, 6, 64, b, McOptions{false});
    CHECK(with_stop.value == without_stop.value);
  }
}

TEST_CASE("mc unbiasedness over repeated runs") {
  UncertainGraph g = test::random_graph(17, 8, 13, 0.1, 0.9);
  double r = oracle::exact_reliability(g, 0, 7);
  const int runs = 200;
  const std::uint64_t k = 500;
  RandomStream rng(1234);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < runs; ++i) {
    RandomStream run = rng.split(i);
    double v = mc_estimate(g, 0, 7, k, run).value;
    sum += v;
    sum_sq += v * v;
  }
  double mean = sum / runs;
  CHECK(std::abs(mean - r) < 4.0 * std::sqrt(r * (1.0 - r) / (runs * k)));

  // Empirical run-to-run variance tracks the closed form within a factor 1.5.
  double var = (sum_sq - runs * mean * mean) / (runs - 1);
  double expected = mc_variance(r, k);
  if (expected > 0) {
    CHECK(var < 1.5 * expected);
    CHECK(var > expected / 1.5);
  }
}

TEST_CASE("mc_variance formula") {
  CHECK(mc_variance(0.5, 1000) == doctest::Approx(0.00025).epsilon(1e-15));
  CHECK(mc_variance(0.0, 123) == 0.0);
  CHECK(mc_variance(1.0, 123) == 0.0);
  CHECK_THROWS_AS(mc_variance(1.5, 10), bad_argument);
  CHECK_THROWS_AS(mc_variance(0.5, 0), bad_argument);
}

TEST_CASE("chernoff_sample_bound frozen values") {
  CHECK(chernoff_sample_bound(0.1, 0.01, 0.5) == 3179);
  CHECK(chernoff_sample_bound(0.1, 0.05, 1.0) == 1107);
  // Near-degenerate: eps = 1, lambda just below 1 -> ceil(3 ln 2 / r).
  CHECK(chernoff_sample_bound(1.0, 0.999999, 1.0) ==
        static_cast<std::uint64_t>(std::ceil(3.0 * std::log(2.0 / 0.999999))));
}

TEST_CASE("chernoff_sample_bound rejects bad arguments") {
  CHECK_THROWS_AS(chernoff_sample_bound(0.1, 0.01, 0.0), bad_argument);
  CHECK_THROWS_AS(chernoff_sample_bound(0.0, 0.01, 0.5), bad_argument);
  CHECK_THROWS_AS(chernoff_sample_bound(0.1, 0.0, 0.5), bad_argument);
  CHECK_THROWS_AS(chernoff_sample_bound(0.1, 1.0, 0.5), bad_argument);
}

TEST_CASE("mc_estimate validates inputs") {
  UncertainGraph g = test::chain3(0.5);
  RandomStream rng(1);
  CHECK_THROWS_AS(mc_estimate(g, 0, 2, 0, rng), bad_argument);
  CHECK_THROWS_AS(mc_estimate(g, 0, 9, 10, rng), bad_argument);
}
