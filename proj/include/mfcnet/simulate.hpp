#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfcnet/ensemble.hpp"
#include "mfcnet/graph.hpp"
#include "mfcnet/problems.hpp"

namespace mfcnet {

// Per-class empirical state distributions over the non-isolated nodes.
// Classes without nodes keep zero rows and zero fraction.
struct EmpiricalField {
  MeanFieldEnsemble ensemble;
  std::vector<double> class_fraction;  // active-node share per class
  std::vector<double> aggregate;       // state distribution over active nodes
  int active = 0;
};

EmpiricalField empirical_mean_field(std::span<const int> states,
                                    const ClassPartition& partition, int n_states);

// Independent mu0 draws, one stream per node.
std::vector<int> init_system(const ProblemSpec& problem, const Graph& graph, uint64_t seed);

// One synchronous decision step under a fixed policy ensemble: every node
// draws an action from its class row and transitions against its neighbors'
// current states; updates states in place and returns the realized mean step
// reward (non-isolated nodes, plus isolated ones when the reward does not
// read the neighborhood; isolated nodes act with the lowest-degree class row
// at an empty neighborhood). Node randomness comes from per-(node, sub-step)
// streams of (seed, t), so trajectories are reproducible.
double advance_system(std::vector<int>& states, const ProblemSpec& problem, const Graph& graph,
                      const ClassPartition& partition, const PolicyEnsemble& policy,
                      uint64_t seed, int t);

struct EpisodeResult {
  double objective = 0.0;
  std::vector<double> step_rewards;
  std::vector<EmpiricalField> trajectory;  // decision boundaries 0..T
  std::vector<int> final_states;
};

// Synchronous dynamics: every node draws an action from its class policy and
// transitions against its neighbors' current states. Step rewards average
// over the non-isolated nodes, plus the isolated ones whenever the reward
// does not read the neighborhood; isolated nodes act with the lowest-degree
// class policy at an empty neighborhood. policies: one ensemble reused at
// every step or one per step.
EpisodeResult simulate_episode(const ProblemSpec& problem, const Graph& graph,
                               const ClassPartition& partition,
                               std::span<const PolicyEnsemble> policies, uint64_t seed);

struct ObjectiveEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> per_episode;
};

ObjectiveEstimate estimate_objective(const ProblemSpec& problem, const Graph& graph,
                                     const ClassPartition& partition,
                                     std::span<const PolicyEnsemble> policies, int n_episodes,
                                     uint64_t seed);

// Mean over t >= 1 of the total variation distance between the paired
// distributions; both trajectories must share length and width.
double mean_total_variation(std::span<const std::vector<double>> a,
                            std::span<const std::vector<double>> b);

}  // namespace mfcnet
