#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfcnet/degree.hpp"
#include "mfcnet/problems.hpp"
#include "mfcnet/rng.hpp"

using namespace mfcnet;

namespace {

std::vector<double> random_simplex(int d, Rng& rng) {
  std::vector<double> v(d);
  double s = 0.0;
  for (auto& x : v) {
    x = -std::log(1.0 - rng.uniform());
    s += x;
  }
  for (auto& x : v) x /= s;
  return v;
}

void check_rows_sum_to_one(const ProblemSpec& p) {
  Rng rng(99);
  std::vector<double> out(p.n_states());
  for (int probe = 0; probe < 200; ++probe) {
    auto g = random_simplex(p.n_states(), rng);
    int k = probe % 21;
    for (int x = 0; x < p.n_states(); ++x) {
      for (int u = 0; u < p.n_actions(); ++u) {
        p.kernel(x, u, g, k, out);
        double s = 0.0;
        for (double v : out) {
          CHECK(v >= 0.0);
          s += v;
        }
        CHECK(std::abs(s - 1.0) < 1e-12);
      }
    }
  }
}

double sig_factor(int k) { return 2.0 / (1.0 + std::exp(-k / 2.0)) - 1.0; }

}  // namespace

TEST_CASE("epidemic kernel values") {
  auto p = sis_problem();
  REQUIRE(p.n_states() == 2);
  REQUIRE(p.n_actions() == 2);
  CHECK(p.horizon == 50);
  CHECK(p.mu0 == std::vector<double>({0.6, 0.4}));

  std::vector<double> g = {0.5, 0.5};  // G(I) = 0.5
  std::vector<double> out(2);
  // unprotected susceptible, degree 4
  p.kernel(0, 1, g, 4, out);
  double expect = 0.4 * 0.5 * sig_factor(4);
  CHECK(out[1] == doctest::Approx(expect).epsilon(1e-14));
  CHECK(out[0] == doctest::Approx(1.0 - expect).epsilon(1e-14));
  // protected susceptible never gets infected
  p.kernel(0, 0, g, 4, out);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 0.0);
  // infected recover at rho_recover regardless of action and neighborhood
  for (int u = 0; u < 2; ++u) {
    p.kernel(1, u, g, 9, out);
    CHECK(out[0] == doctest::Approx(0.1));
    CHECK(out[1] == doctest::Approx(0.9));
  }
  // degree 0: no infection channel
  p.kernel(0, 1, g, 0, out);
  CHECK(out[0] == 1.0);

  // the infection probability is clamped at 1
  SisParams hot;
  hot.rho_infect = 50.0;
  auto ph = sis_problem(hot);
  std::vector<double> all_i = {0.0, 1.0};
  ph.kernel(0, 1, all_i, 30, out);
  CHECK(out[1] == 1.0);

  check_rows_sum_to_one(p);
}

TEST_CASE("epidemic rewards") {
  auto p = sis_problem();
  std::vector<double> g = {0.5, 0.5}, mu = {0.6, 0.4};
  CHECK(p.reward(0, 0, g, mu) == doctest::Approx(-0.5));
  CHECK(p.reward(0, 1, g, mu) == doctest::Approx(0.0));
  CHECK(p.reward(1, 0, g, mu) == doctest::Approx(-1.5));
  CHECK(p.reward(1, 1, g, mu) == doctest::Approx(-1.0));
  CHECK_FALSE(p.reward_uses_neighborhood);
}

TEST_CASE("sir has an absorbing removed state") {
  auto p = sir_problem();
  REQUIRE(p.n_states() == 3);
  CHECK(p.mu0 == std::vector<double>({0.9, 0.1, 0.0}));
  Rng rng(3);
  std::vector<double> out(3);
  for (int probe = 0; probe < 50; ++probe) {
    auto g = random_simplex(3, rng);
    for (int u = 0; u < 2; ++u) {
      p.kernel(2, u, g, probe % 12, out);
      CHECK(out[2] == 1.0);
      // infected move to removed, never back to susceptible
      p.kernel(1, u, g, probe % 12, out);
      CHECK(out[2] == doctest::Approx(0.02));
      CHECK(out[1] == doctest::Approx(0.98));
      CHECK(out[0] == 0.0);
    }
  }
  std::vector<double> g = {0.0, 1.0, 0.0};
  p.kernel(0, 1, g, 6, out);
  CHECK(out[1] == doctest::Approx(0.1 * sig_factor(6)).epsilon(1e-14));
  check_rows_sum_to_one(p);
}

TEST_CASE("color kernel rotates toward the chosen target") {
  auto p = color_problem();
  REQUIRE(p.n_states() == 5);
  REQUIRE(p.n_actions() == 3);
  CHECK(p.horizon == 20);
  CHECK(p.mu0 == std::vector<double>({1.0, 0.0, 0.0, 0.0, 0.0}));

  std::vector<double> g = {0.3, 0.25, 0.2, 0.15, 0.1};
  const int k = 3;
  std::vector<double> out(5);
  auto disturb = [&](int j) {
    return std::min(1.0, g[j] * g[j] * 0.9 * std::exp(-2.0 / k));
  };
  // action "stay" from color j keeps j with prob 1 - disturb, spills to the
  // two ring neighbors evenly
  for (int j = 0; j < 5; ++j) {
    p.kernel(j, 1, g, k, out);
    double dj = disturb(j);
    CHECK(out[j] == doctest::Approx(1.0 - dj).epsilon(1e-13));
    CHECK(out[(j + 4) % 5] == doctest::Approx(dj / 2).epsilon(1e-13));
    CHECK(out[(j + 1) % 5] == doctest::Approx(dj / 2).epsilon(1e-13));
    CHECK(out[(j + 2) % 5] == 0.0);
    CHECK(out[(j + 3) % 5] == 0.0);
  }
  // action "left" targets j - 1; perturbation still driven by the current color
  for (int j = 0; j < 5; ++j) {
    p.kernel(j, 0, g, k, out);
    double dj = disturb(j);
    CHECK(out[(j + 4) % 5] == doctest::Approx(1.0 - dj).epsilon(1e-13));
    CHECK(out[(j + 3) % 5] == doctest::Approx(dj / 2).epsilon(1e-13));
    CHECK(out[j] == doctest::Approx(dj / 2).epsilon(1e-13));
  }
  // action "right" targets j + 1
  for (int j = 0; j < 5; ++j) {
    p.kernel(j, 2, g, k, out);
    double dj = disturb(j);
    CHECK(out[(j + 1) % 5] == doctest::Approx(1.0 - dj).epsilon(1e-13));
    CHECK(out[j] == doctest::Approx(dj / 2).epsilon(1e-13));
    CHECK(out[(j + 2) % 5] == doctest::Approx(dj / 2).epsilon(1e-13));
  }
  check_rows_sum_to_one(p);

  // degree 0 never gets disturbed
  p.kernel(2, 1, g, 0, out);
  CHECK(out[2] == 1.0);
}

TEST_CASE("color reward") {
  auto p = color_problem();
  CHECK(p.reward_uses_neighborhood);
  std::vector<double> g = {0.3, 0.25, 0.2, 0.15, 0.1};
  std::vector<double> mu = {0.2, 0.2, 0.2, 0.2, 0.2};
  std::vector<double> target = {0.1, 0.2, 0.4, 0.2, 0.1};
  double mismatch = 0.0;
  for (int i = 0; i < 5; ++i) mismatch += std::abs(mu[i] - target[i]);
  // state 2, action stay: no move cost; ring neighbors are colors 1 and 3
  double expect = -(g[1] + g[3]) * 0.5 - mismatch * 1.0;
  CHECK(p.reward(2, 1, g, mu) == doctest::Approx(expect).epsilon(1e-13));
  // moving costs 0.1 either direction
  CHECK(p.reward(2, 0, g, mu) == doctest::Approx(expect - 0.1).epsilon(1e-13));
  CHECK(p.reward(2, 2, g, mu) == doctest::Approx(expect - 0.1).epsilon(1e-13));
}

TEST_CASE("rumor kernel records actions then resolves awareness") {
  auto p = rumor_problem();
  REQUIRE(p.n_states() == 6);
  REQUIRE(p.n_actions() == 2);
  REQUIRE(p.substeps == 2);
  CHECK(p.mu0 == std::vector<double>({0.9, 0.1, 0.0, 0.0, 0.0, 0.0}));

  // state order: ignorant, aware, then (base, action) pairs
  // 2 = ignorant+spread, 3 = ignorant+silent, 4 = aware+spread, 5 = aware+silent
  Rng rng(17);
  std::vector<double> out(6);
  for (int probe = 0; probe < 40; ++probe) {
    auto g = random_simplex(6, rng);
    int k = 1 + probe % 9;
    // sub-step one: deterministic move into the (state, action) pair
    p.kernel(0, 0, g, k, out);
    CHECK(out[2] == 1.0);
    p.kernel(0, 1, g, k, out);
    CHECK(out[3] == 1.0);
    p.kernel(1, 0, g, k, out);
    CHECK(out[4] == 1.0);
    p.kernel(1, 1, g, k, out);
    CHECK(out[5] == 1.0);
    // sub-step two: ignorant pairs hear the rumor from spreading-aware
    // neighbors; the pair's own recorded action is irrelevant
    double q = std::min(1.0, 0.3 * g[4] * sig_factor(k));
    for (int pair_state : {2, 3}) {
      for (int u = 0; u < 2; ++u) {
        p.kernel(pair_state, u, g, k, out);
        CHECK(out[1] == doctest::Approx(q).epsilon(1e-13));
        CHECK(out[0] == doctest::Approx(1.0 - q).epsilon(1e-13));
      }
    }
    // aware pairs return to aware
    for (int pair_state : {4, 5}) {
      p.kernel(pair_state, 0, g, k, out);
      CHECK(out[1] == 1.0);
    }
  }
  check_rows_sum_to_one(p);
}

TEST_CASE("rumor two sub-steps compose to a two-state chain when the neighborhood is frozen") {
  auto p = rumor_problem();
  std::vector<double> g = {0.1, 0.2, 0.05, 0.15, 0.3, 0.2};
  const int k = 4;
  double q = std::min(1.0, 0.3 * g[4] * sig_factor(k));
  // ignorant agent always choosing "spread": I -> (I,spread) -> {A w.p. q}
  std::vector<double> mid(6), fin(6);
  p.kernel(0, 0, g, k, mid);
  std::vector<double> total(6, 0.0);
  for (int m = 0; m < 6; ++m) {
    if (mid[m] == 0.0) continue;
    p.kernel(m, 0, g, k, fin);
    for (int y = 0; y < 6; ++y) total[y] += mid[m] * fin[y];
  }
  CHECK(total[1] == doctest::Approx(q).epsilon(1e-13));
  CHECK(total[0] == doctest::Approx(1.0 - q).epsilon(1e-13));
  CHECK(total[2] + total[3] + total[4] + total[5] == 0.0);
}

TEST_CASE("rumor reward pays spreading-aware agents by ignorant reach") {
  auto p = rumor_problem();
  CHECK(p.reward_uses_neighborhood);
  std::vector<double> g = {0.0, 0.0, 0.3, 0.25, 0.28, 0.17};
  std::vector<double> mu(6, 1.0 / 6);
  double expect = 4.0 * (g[2] + g[3]) - 16.0 * (g[4] + g[5]);
  CHECK(p.reward(4, 0, g, mu) == doctest::Approx(expect).epsilon(1e-13));
  // silent aware, ignorant, and bare-aware states collect nothing
  for (int x : {0, 1, 2, 3, 5})
    for (int u = 0; u < 2; ++u) CHECK(p.reward(x, u, g, mu) == 0.0);
}

TEST_CASE("ensemble reward mixes classes by node mass") {
  auto p = sis_problem();
  const int kc = 10;
  auto ens = MeanFieldEnsemble::replicated(p.mu0, kc);
  std::vector<double> row = {0.25, 0.75, 0.25, 0.75};  // P w.p. 0.25 in both states
  auto pol = PolicyEnsemble::shared(kc, 2, 2, row);
  auto cm = DegreeDistribution::power_law(2.5).class_masses(kc);
  std::vector<double> g_hat = {0.6, 0.4};
  double r = mean_field_reward(p, ens, pol, g_hat, cm.node);
  CHECK(r == doctest::Approx(-0.25 * 0.5 - 0.4 * 1.0).epsilon(1e-12));
}
