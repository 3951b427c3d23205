#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "mfcnet/graph.hpp"
#include "mfcnet/meanfield.hpp"
#include "mfcnet/problems.hpp"
#include "mfcnet/simulate.hpp"

using namespace mfcnet;

namespace {

Graph two_node_graph() {
  Graph g;
  g.adj = {{1}, {0}};
  g.edges = 1;
  return g;
}

Graph cycle_graph(int n) {
  Graph g;
  g.adj.resize(n);
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    g.adj[i].push_back(j);
    g.adj[j].push_back(i);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  g.edges = n;
  return g;
}

// Exact one-step law of the two-node system: both nodes iid mu0, actions from
// the class-1 policy, each node's neighborhood is the point mass at the other
// node's current state.
struct TwoNodeOracle {
  std::map<std::pair<int, int>, double> next_joint;
  double mean_reward = 0.0;
};

TwoNodeOracle two_node_one_step(const ProblemSpec& prob, const PolicyEnsemble& pol) {
  const int d = prob.n_states();
  const int na = prob.n_actions();
  TwoNodeOracle out;
  std::vector<double> g0(d), g1(d), row0(d), row1(d);
  for (int x0 = 0; x0 < d; ++x0)
    for (int x1 = 0; x1 < d; ++x1) {
      double px = prob.mu0[x0] * prob.mu0[x1];
      if (px == 0.0) continue;
      std::fill(g0.begin(), g0.end(), 0.0);
      std::fill(g1.begin(), g1.end(), 0.0);
      g0[x1] = 1.0;
      g1[x0] = 1.0;
      std::vector<double> mu(d, 0.0);
      mu[x0] += 0.5;
      mu[x1] += 0.5;
      for (int u0 = 0; u0 < na; ++u0)
        for (int u1 = 0; u1 < na; ++u1) {
          double pu = px * pol.prob(0, x0, u0) * pol.prob(0, x1, u1);
          if (pu == 0.0) continue;
          out.mean_reward +=
              pu * 0.5 * (prob.reward(x0, u0, g0, mu) + prob.reward(x1, u1, g1, mu));
          prob.kernel(x0, u0, g0, 1, row0);
          prob.kernel(x1, u1, g1, 1, row1);
          for (int y0 = 0; y0 < d; ++y0)
            for (int y1 = 0; y1 < d; ++y1)
              out.next_joint[{y0, y1}] += pu * row0[y0] * row1[y1];
        }
    }
  return out;
}

}  // namespace

TEST_CASE("two node episode matches the exact one-step law") {
  auto g = two_node_graph();
  auto part = partition_classes(g, 1);
  SisParams sp;
  sp.horizon = 1;
  auto prob = sis_problem(sp);
  std::vector<double> matrix = {0.3, 0.7, 0.6, 0.4};
  std::vector<PolicyEnsemble> pols = {PolicyEnsemble::shared(1, 2, 2, matrix)};
  auto oracle = two_node_one_step(prob, pols[0]);

  const int n_episodes = 40000;
  std::map<std::pair<int, int>, int64_t> counts;
  double reward_sum = 0.0;
  for (int e = 0; e < n_episodes; ++e) {
    auto ep = simulate_episode(prob, g, part, pols, 900 + e);
    reward_sum += ep.objective;
    int y0 = ep.final_states[0], y1 = ep.final_states[1];
    ++counts[{y0, y1}];
  }
  for (const auto& [cell, p] : oracle.next_joint) {
    double freq = static_cast<double>(counts[cell]) / n_episodes;
    double se = std::sqrt(std::max(p * (1 - p), 1e-9) / n_episodes);
    CHECK(std::abs(freq - p) < 4 * se);
  }
  CHECK(std::abs(reward_sum / n_episodes - oracle.mean_reward) < 0.02);
}

TEST_CASE("rumor episode resolves pairs and scores mid-step") {
  auto g = two_node_graph();
  auto part = partition_classes(g, 1);
  RumorParams rp;
  rp.horizon = 1;
  auto prob = rumor_problem(rp);
  // always spread
  std::vector<double> matrix(12, 0.0);
  for (int x = 0; x < 6; ++x) matrix[x * 2 + 0] = 1.0;
  std::vector<PolicyEnsemble> pols = {PolicyEnsemble::shared(1, 6, 2, matrix)};

  // E[reward per node] = P(aware) * (0.9 * reward_spread - 0.1 * cost_spread)
  double expect = 0.1 * (0.9 * rp.reward_spread - 0.1 * rp.cost_spread);
  const int n_episodes = 30000;
  double reward_sum = 0.0;
  for (int e = 0; e < n_episodes; ++e) {
    auto ep = simulate_episode(prob, g, part, pols, 4200 + e);
    reward_sum += ep.objective;
    // one decision step lands back on base states
    CHECK(ep.final_states[0] < 2);
    CHECK(ep.final_states[1] < 2);
  }
  double se = 1.5 / std::sqrt(n_episodes);
  CHECK(std::abs(reward_sum / n_episodes - expect) < 4 * se);
}

TEST_CASE("empirical mean field on a hand partition") {
  Graph g;
  g.adj = {{1}, {0, 2}, {1}, {}};
  g.edges = 2;
  auto part = partition_classes(g, 1);
  std::vector<int> states = {0, 1, 1, 0};
  auto field = empirical_mean_field(states, part, 2);
  CHECK(field.active == 3);
  CHECK(field.ensemble.dist[0][0] == doctest::Approx(0.5));
  CHECK(field.ensemble.dist[0][1] == doctest::Approx(0.5));
  CHECK(field.ensemble.dist[1][0] == 0.0);
  CHECK(field.ensemble.dist[1][1] == 1.0);
  CHECK(field.class_fraction[0] == doctest::Approx(2.0 / 3));
  CHECK(field.class_fraction[1] == doctest::Approx(1.0 / 3));
  CHECK(field.aggregate[0] == doctest::Approx(1.0 / 3));
  CHECK(field.aggregate[1] == doctest::Approx(2.0 / 3));

  // absent class: every node isolated except one edge, cutoff 2
  Graph g2;
  g2.adj = {{1}, {0}, {}};
  g2.edges = 1;
  auto part2 = partition_classes(g2, 2);
  std::vector<int> st2 = {0, 1, 0};
  auto f2 = empirical_mean_field(st2, part2, 2);
  CHECK(f2.class_fraction[1] == 0.0);
  CHECK(f2.class_fraction[2] == 0.0);
  CHECK(f2.ensemble.dist[1][0] == 0.0);
  CHECK(f2.ensemble.dist[1][1] == 0.0);
}

TEST_CASE("init concentrates on mu0 and follows the seed") {
  Graph g = cycle_graph(20000);
  SisParams sp;
  auto prob = sis_problem(sp);
  auto a = init_system(prob, g, 7);
  auto b = init_system(prob, g, 7);
  auto c = init_system(prob, g, 8);
  CHECK(a == b);
  CHECK(a != c);
  double frac = 0.0;
  for (int s : a) frac += s == 1 ? 1.0 : 0.0;
  frac /= a.size();
  double se = std::sqrt(0.4 * 0.6 / a.size());
  CHECK(std::abs(frac - 0.4) < 4 * se);
}

TEST_CASE("episodes are reproducible and reward averaging respects isolation") {
  Graph g;
  g.adj = {{1}, {0}, {}};
  g.edges = 1;
  auto part = partition_classes(g, 1);
  SisParams sp;
  sp.horizon = 3;
  auto prob = sis_problem(sp);
  std::vector<PolicyEnsemble> pols = {PolicyEnsemble::uniform(1, 2, 2)};
  auto e1 = simulate_episode(prob, g, part, pols, 99);
  auto e2 = simulate_episode(prob, g, part, pols, 99);
  CHECK(e1.objective == e2.objective);
  CHECK(e1.final_states == e2.final_states);
  REQUIRE(e1.trajectory.size() == 4);
  for (size_t t = 0; t < e1.trajectory.size(); ++t)
    CHECK(e1.trajectory[t].aggregate == e2.trajectory[t].aggregate);

  // SIS rewards count the isolated node: with the protect action its cost
  // shows up even though it has no neighbors
  std::vector<double> protect = {1.0, 0.0, 1.0, 0.0};
  std::vector<PolicyEnsemble> pp = {PolicyEnsemble::shared(1, 2, 2, protect)};
  SisParams all_s;
  all_s.mu0_infected = 0.0;
  all_s.horizon = 1;
  auto prob2 = sis_problem(all_s);
  auto ep = simulate_episode(prob2, g, part, pp, 3);
  CHECK(ep.objective == doctest::Approx(-all_s.cost_protect).epsilon(1e-12));
}

TEST_CASE("estimate objective matches episode means") {
  auto g = two_node_graph();
  auto part = partition_classes(g, 1);
  SisParams sp;
  sp.horizon = 2;
  auto prob = sis_problem(sp);
  std::vector<PolicyEnsemble> pols = {PolicyEnsemble::uniform(1, 2, 2)};
  auto est = estimate_objective(prob, g, part, pols, 50, 1234);
  double mean = 0.0;
  for (double j : est.per_episode) mean += j;
  mean /= est.per_episode.size();
  CHECK(est.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(est.per_episode.size() == 50);
  CHECK(est.std_error > 0.0);

  auto est2 = estimate_objective(prob, g, part, pols, 50, 1234);
  CHECK(est.mean == est2.mean);
}

TEST_CASE("mean total variation over a trajectory pair") {
  std::vector<std::vector<double>> a = {{1, 0}, {0.5, 0.5}, {0, 1}};
  std::vector<std::vector<double>> b = {{1, 0}, {1, 0}, {0, 1}};
  CHECK(mean_total_variation(a, b) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mean_total_variation(a, a) == 0.0);
}

TEST_CASE("cycle simulation tracks the degree-two limiting dynamics") {
  const int n = 3000;
  Graph g = cycle_graph(n);
  auto part = partition_classes(g, 2);
  auto dist = DegreeDistribution::explicit_pmf({{2, 1.0}});
  SirParams sp;
  sp.horizon = 10;
  auto prob = sir_problem(sp);
  std::vector<PolicyEnsemble> pols = {PolicyEnsemble::uniform(2, 3, 2)};

  auto limit = mean_field_rollout(prob, dist, 2, pols, {});

  const int n_episodes = 5;
  std::vector<std::vector<double>> mean_agg(11, std::vector<double>(3, 0.0));
  for (int e = 0; e < n_episodes; ++e) {
    auto ep = simulate_episode(prob, g, part, pols, 31 + e);
    for (size_t t = 0; t < ep.trajectory.size(); ++t)
      for (int x = 0; x < 3; ++x)
        mean_agg[t][x] += ep.trajectory[t].aggregate[x] / n_episodes;
  }
  double delta = mean_total_variation(mean_agg, limit.aggregate);
  CHECK(delta < 0.05);
}
