#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfcnet/degree.hpp"
#include "oracles.hpp"

using mfcnet::DegreeDistribution;
using mfcnet::Rng;

TEST_CASE("zeta function matches the direct series") {
  for (double s : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    double ref = static_cast<double>(oracle::zeta_series(s));
    CHECK(mfcnet::zeta_function(s) == doctest::Approx(ref).epsilon(1e-12));
  }
  // Known digits as an extra anchor.
  CHECK(mfcnet::zeta_function(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
}

TEST_CASE("power-law pmf values and shape") {
  auto d = DegreeDistribution::power_law(3.0);
  double z3 = static_cast<double>(oracle::zeta_series(3.0L));
  CHECK(d.pmf(2) == doctest::Approx(0.125 / z3).epsilon(1e-12));
  CHECK(d.pmf(1) == doctest::Approx(1.0 / z3).epsilon(1e-12));

  auto d25 = DegreeDistribution::power_law(2.5);
  for (int k = 1; k < 1000; ++k) CHECK(d25.pmf(k) > d25.pmf(k + 1));
  CHECK(d25.pmf(0) == 0.0);
  // Mass above the default truncation is ~5e-10.
  CHECK(d25.cdf(1'000'000) > 1.0 - 2e-9);
  CHECK(d25.cdf(1'000'000) <= 1.0 + 1e-12);
}

TEST_CASE("exponents at or below 2 are rejected") {
  CHECK_THROWS_AS(DegreeDistribution::power_law(2.0), std::invalid_argument);
  CHECK_THROWS_AS(DegreeDistribution::power_law(1.5), std::invalid_argument);
  CHECK_THROWS_AS(DegreeDistribution::power_law(-1.0), std::invalid_argument);
}

TEST_CASE("mean degree") {
  auto d = DegreeDistribution::power_law(2.5);
  double ref = static_cast<double>(oracle::zeta_series(1.5L) / oracle::zeta_series(2.5L));
  CHECK(d.mean() == doctest::Approx(ref).epsilon(1e-10));

  auto e = DegreeDistribution::explicit_pmf({{1, 0.5}, {3, 0.5}});
  CHECK(e.mean() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("size-biased neighbor law") {
  auto e = DegreeDistribution::explicit_pmf({{1, 0.5}, {3, 0.5}});
  CHECK(e.neighbor_pmf(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(e.neighbor_pmf(3) == doctest::Approx(0.75).epsilon(1e-15));

  auto d = DegreeDistribution::power_law(2.5);
  for (int64_t k : {int64_t{1}, int64_t{2}, int64_t{17}, int64_t{999}, int64_t{500000}}) {
    CHECK(std::abs(d.neighbor_pmf(k) * d.mean() - k * d.pmf(k)) < 1e-12);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) sum += d.neighbor_pmf(k);
  CHECK(sum == doctest::Approx(d.neighbor_cdf(100)).epsilon(1e-10));
  CHECK(d.neighbor_cdf(100) < 1.0);
}

TEST_CASE("neighbor law for gamma 2.5 concentrates on low degrees") {
  // Anchors: ~96% of nodes have degree <= 5, yet a random neighbor has
  // degree <= 5 only ~67% and <= 10 about 76% of the time.
  auto d = DegreeDistribution::power_law(2.5);
  CHECK(d.cdf(5) >= 0.955);
  CHECK(d.cdf(5) <= 0.965);
  CHECK(d.neighbor_cdf(5) > 0.66);
  CHECK(d.neighbor_cdf(5) < 0.68);
  CHECK(d.neighbor_cdf(10) >= 0.75);
  CHECK(d.neighbor_cdf(10) <= 0.77);
}

TEST_CASE("class masses sum to one and split at the cutoff") {
  auto d = DegreeDistribution::power_law(2.5);
  for (int kc : {1, 3, 5, 10, 25}) {
    auto cm = d.class_masses(kc);
    REQUIRE(cm.node.size() == size_t(kc + 1));
    REQUIRE(cm.neighbor.size() == size_t(kc + 1));
    double ns = 0.0, es = 0.0;
    for (int c = 0; c <= kc; ++c) {
      CHECK(cm.node[c] >= 0.0);
      CHECK(cm.neighbor[c] >= 0.0);
      ns += cm.node[c];
      es += cm.neighbor[c];
    }
    CHECK(std::abs(ns - 1.0) < 1e-9);
    CHECK(std::abs(es - 1.0) < 1e-9);
    for (int c = 0; c < kc; ++c) {
      CHECK(cm.node[c] == doctest::Approx(d.pmf(c + 1)).epsilon(1e-12));
      CHECK(cm.neighbor[c] == doctest::Approx(d.neighbor_pmf(c + 1)).epsilon(1e-12));
    }
    CHECK(cm.node[kc] == doctest::Approx(1.0 - d.cdf(kc)).epsilon(1e-9));
  }

  auto e = DegreeDistribution::explicit_pmf({{1, 0.5}, {3, 0.5}});
  auto cm = e.class_masses(2);
  CHECK(cm.node[0] == doctest::Approx(0.5));
  CHECK(cm.node[1] == doctest::Approx(0.0));
  CHECK(cm.node[2] == doctest::Approx(0.5));
  CHECK(cm.neighbor[0] == doctest::Approx(0.25));
  CHECK(cm.neighbor[2] == doctest::Approx(0.75));
}

TEST_CASE("tail mean") {
  auto d = DegreeDistribution::power_law(2.5);
  // E[deg | deg > 10] = (zeta(1.5) - sum_{h<=10} h^-1.5) / (zeta(2.5) - sum_{k<=10} k^-2.5)
  long double num = oracle::zeta_series(1.5L);
  long double den = oracle::zeta_series(2.5L);
  for (int h = 1; h <= 10; ++h) {
    num -= powl(h, -1.5L);
    den -= powl(h, -2.5L);
  }
  CHECK(d.tail_mean(10) == doctest::Approx(static_cast<double>(num / den)).epsilon(1e-8));

  auto e = DegreeDistribution::explicit_pmf({{1, 0.5}, {3, 0.5}});
  CHECK(e.tail_mean(2) == doctest::Approx(3.0));
  CHECK_THROWS_AS(e.tail_mean(3), std::invalid_argument);
}

TEST_CASE("empirical distribution from a degree sequence") {
  std::vector<int64_t> degs = {2, 2, 3, 0};
  auto d = DegreeDistribution::empirical(degs);
  CHECK(d.isolated_count() == 1);
  CHECK(d.pmf(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(d.pmf(3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(d.pmf(1) == 0.0);
  CHECK(d.mean() == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(d.max_degree() == 3);

  std::vector<int64_t> zeros = {0, 0};
  CHECK_THROWS_AS(DegreeDistribution::empirical(zeros), std::invalid_argument);
}

TEST_CASE("explicit pmf validation") {
  CHECK_THROWS_AS(DegreeDistribution::explicit_pmf({{0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeDistribution::explicit_pmf({{1, 0.4}, {2, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(DegreeDistribution::explicit_pmf({{1, -0.5}, {2, 1.5}}), std::invalid_argument);
}

TEST_CASE("sampling matches the law") {
  auto d = DegreeDistribution::power_law(2.5);
  Rng rng(20240901);
  const int n = 200000;
  int ones = 0, les5 = 0;
  for (int i = 0; i < n; ++i) {
    int64_t k = d.sample(rng);
    ones += (k == 1);
    les5 += (k <= 5);
  }
  double p1 = d.pmf(1);
  double se1 = std::sqrt(p1 * (1 - p1) / n);
  CHECK(std::abs(ones / double(n) - p1) < 4 * se1);
  double p5 = d.cdf(5);
  double se5 = std::sqrt(p5 * (1 - p5) / n);
  CHECK(std::abs(les5 / double(n) - p5) < 4 * se5);

  // Same seed, same stream.
  Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) CHECK(d.sample(a) == d.sample(b));
}
