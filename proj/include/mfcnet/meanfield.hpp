#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfcnet/degree.hpp"
#include "mfcnet/ensemble.hpp"
#include "mfcnet/problems.hpp"

namespace mfcnet {

// C(k + d - 1, d - 1), saturating at INT64_MAX.
int64_t count_neighbor_counts(int k, int d);

// All neighbor state-count vectors of a degree-k node over d states, first
// coordinate descending. Throws std::length_error when the count exceeds cap.
std::vector<std::vector<int32_t>> enumerate_neighbor_counts(int k, int d,
                                                            int64_t cap = 100000);

double multinomial_pmf(std::span<const int32_t> counts, std::span<const double> p);

// State distribution of the node at the end of a uniformly random edge.
std::vector<double> neighbor_state_mixture(const MeanFieldEnsemble& ensemble,
                                           std::span<const double> neighbor_mass);

struct StepOptions {
  bool sampled = false;   // Monte Carlo over neighborhoods instead of enumeration
  int n_samples = 10000;
  uint64_t seed = 0;
  int tail_degree_override = 0;  // > 0 replaces round(E[deg | deg > cutoff])
  int64_t enum_cap = 100000;
};

struct StepResult {
  MeanFieldEnsemble next;
  // Expected reward of this decision step; for two-sub-step problems it is
  // evaluated on the mid-step ensemble where actions are recorded in states.
  double reward = 0.0;
  SimplexDrift drift;
};

// One decision step of the limiting dynamics: low-degree classes average the
// kernel over multinomial neighborhoods drawn from the neighbor mixture, the
// tail class sees the mixture itself at its effective degree.
StepResult mean_field_step(const MeanFieldEnsemble& ensemble, const PolicyEnsemble& policy,
                           const ProblemSpec& problem, const DegreeDistribution& dist,
                           const StepOptions& options = {});

struct RolloutResult {
  double objective = 0.0;
  std::vector<MeanFieldEnsemble> trajectory;    // decision boundaries 0..T
  std::vector<std::vector<double>> aggregate;   // node-mass mixture per boundary
  std::vector<double> step_rewards;
  SimplexDrift drift;
};

// policies: either a single ensemble reused at every step or one per step.
RolloutResult mean_field_rollout(const ProblemSpec& problem, const DegreeDistribution& dist,
                                 int k_cutoff, std::span<const PolicyEnsemble> policies,
                                 const StepOptions& options = {});

// Columns t,class,state,probability; class is 1..k_cutoff, "tail", or
// "aggregate". The comment line, if nonempty, is written first.
void write_trajectory_csv(const RolloutResult& result,
                          const std::vector<std::string>& state_names,
                          const std::string& path, const std::string& comment);

}  // namespace mfcnet
