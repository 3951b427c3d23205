#include "mfcnet/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "mfcnet/rng.hpp"

namespace mfcnet {

namespace {

// Stream tags: 0 is the initial draw, decision step t sub-step s gets
// 1 + t * substeps + s. One stream per (node, tag) keeps episodes
// reproducible regardless of traversal order.
constexpr uint64_t kInitTag = 0;

}  // namespace

EmpiricalField empirical_mean_field(std::span<const int> states,
                                    const ClassPartition& partition, int n_states) {
  const int kc = partition.k_cutoff;
  EmpiricalField field;
  field.ensemble.k_cutoff = kc;
  field.ensemble.n_states = n_states;
  field.ensemble.dist.assign(n_classes(kc), std::vector<double>(n_states, 0.0));
  field.class_fraction.assign(n_classes(kc), 0.0);
  field.aggregate.assign(n_states, 0.0);

  std::vector<int64_t> per_class(n_classes(kc), 0);
  for (size_t i = 0; i < states.size(); ++i) {
    int slot = partition.slot(static_cast<int>(i));
    if (slot < 0) continue;  // isolated
    ++per_class[slot];
    ++field.active;
    field.ensemble.dist[slot][states[i]] += 1.0;
    field.aggregate[states[i]] += 1.0;
  }
  for (int c = 0; c <= kc; ++c) {
    if (per_class[c] == 0) continue;
    for (double& v : field.ensemble.dist[c]) v /= static_cast<double>(per_class[c]);
    field.class_fraction[c] = static_cast<double>(per_class[c]) / field.active;
  }
  if (field.active > 0)
    for (double& v : field.aggregate) v /= field.active;
  return field;
}

std::vector<int> init_system(const ProblemSpec& problem, const Graph& graph, uint64_t seed) {
  std::vector<int> states(graph.n());
  for (size_t i = 0; i < states.size(); ++i) {
    Rng rng = Rng::stream(seed, i, kInitTag);
    states[i] = rng.categorical(problem.mu0);
  }
  return states;
}

double advance_system(std::vector<int>& states, const ProblemSpec& problem, const Graph& graph,
                      const ClassPartition& partition, const PolicyEnsemble& policy,
                      uint64_t seed, int t) {
  const int d = problem.n_states();
  const int n = static_cast<int>(graph.n());
  if (policy.k_cutoff != partition.k_cutoff || policy.n_states != d)
    throw std::invalid_argument("advance_system: policy does not match partition or problem");

  std::vector<int> snapshot(states.size());
  std::vector<double> g(d), row(d);
  double step_reward = 0.0;
  for (int s = 0; s < problem.substeps; ++s) {
    snapshot = states;
    const bool scoring = s == problem.substeps - 1;
    std::vector<double> mu_hat;
    if (scoring) mu_hat = empirical_mean_field(snapshot, partition, d).aggregate;
    double reward_sum = 0.0;
    int64_t counted = 0;
    for (int i = 0; i < n; ++i) {
      const int k = graph.degree(i);
      std::fill(g.begin(), g.end(), 0.0);
      if (k > 0) {
        for (int j : graph.adj[i]) g[snapshot[j]] += 1.0;
        for (double& v : g) v /= k;
      }
      const int slot = k > 0 ? partition.slot(i) : 0;
      Rng rng = Rng::stream(seed, static_cast<uint64_t>(i),
                            1 + static_cast<uint64_t>(t) * problem.substeps + s);
      int u = rng.categorical(policy.row(slot, snapshot[i]));
      if (scoring && (k > 0 || !problem.reward_uses_neighborhood)) {
        reward_sum += problem.reward(snapshot[i], u, g, mu_hat);
        ++counted;
      }
      problem.kernel(snapshot[i], u, g, k, row);
      states[i] = rng.categorical(row);
    }
    if (scoring) step_reward = counted > 0 ? reward_sum / counted : 0.0;
  }
  return step_reward;
}

EpisodeResult simulate_episode(const ProblemSpec& problem, const Graph& graph,
                               const ClassPartition& partition,
                               std::span<const PolicyEnsemble> policies, uint64_t seed) {
  const int T = problem.horizon;
  if (policies.empty() || (policies.size() != 1 && static_cast<int>(policies.size()) < T))
    throw std::invalid_argument("simulate_episode: need one policy or one per step");
  const int d = problem.n_states();

  EpisodeResult result;
  std::vector<int> states = init_system(problem, graph, seed);
  result.trajectory.push_back(empirical_mean_field(states, partition, d));

  for (int t = 0; t < T; ++t) {
    const PolicyEnsemble& pol = policies.size() == 1 ? policies[0] : policies[t];
    double step_reward = advance_system(states, problem, graph, partition, pol, seed, t);
    result.step_rewards.push_back(step_reward);
    result.objective += step_reward;
    result.trajectory.push_back(empirical_mean_field(states, partition, d));
  }
  result.final_states = std::move(states);
  return result;
}

ObjectiveEstimate estimate_objective(const ProblemSpec& problem, const Graph& graph,
                                     const ClassPartition& partition,
                                     std::span<const PolicyEnsemble> policies, int n_episodes,
                                     uint64_t seed) {
  if (n_episodes < 1) throw std::invalid_argument("estimate_objective: need at least one episode");
  ObjectiveEstimate est;
  est.per_episode.reserve(n_episodes);
  for (int e = 0; e < n_episodes; ++e) {
    auto ep = simulate_episode(problem, graph, partition, policies,
                               hash_mix(seed, static_cast<uint64_t>(e)));
    est.per_episode.push_back(ep.objective);
    est.mean += ep.objective;
  }
  est.mean /= n_episodes;
  if (n_episodes > 1) {
    double ss = 0.0;
    for (double j : est.per_episode) ss += (j - est.mean) * (j - est.mean);
    est.std_error = std::sqrt(ss / (n_episodes - 1) / n_episodes);
  }
  return est;
}

double mean_total_variation(std::span<const std::vector<double>> a,
                            std::span<const std::vector<double>> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("mean_total_variation: trajectories must pair up over t >= 1");
  double total = 0.0;
  for (size_t t = 1; t < a.size(); ++t) total += 0.5 * l1_distance(a[t], b[t]);
  return total / static_cast<double>(a.size() - 1);
}

}  // namespace mfcnet
