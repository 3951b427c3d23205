#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfcnet/degree.hpp"
#include "mfcnet/ensemble.hpp"
#include "mfcnet/problems.hpp"

namespace mfcnet {

// Nonnegative integer matrices with the given row and column sums, rows
// enumerated as compositions with the first coordinate descending.
std::vector<std::vector<int32_t>> enumerate_count_tables(std::span<const int32_t> row_sums,
                                                         std::span<const int32_t> col_sums);

// Nonnegative tensors v[i][j][m] (flattened (i * d + j) * n_classes + m) with
// sum over (j,m) equal to next[i], over (i,m) equal to cur[j] and over (i,j)
// equal to deg[m]. Empty when the three totals disagree.
std::vector<std::vector<int32_t>> enumerate_transition_tables(std::span<const int32_t> next,
                                                              std::span<const int32_t> cur,
                                                              std::span<const int32_t> deg);

// Class distribution of a uniformly random edge end given the end's state,
// i.e. neighbor_mass[c] * mu^c(state) renormalized over classes. Throws
// std::domain_error when no class puts mass on the state.
std::vector<double> conditional_degree_given_state(const MeanFieldEnsemble& ensemble,
                                                   std::span<const double> neighbor_mass,
                                                   int state);

// Joint law of (neighbor state counts, own state) for one degree class.
struct JointClass {
  int degree = 0;
  std::vector<std::vector<int32_t>> support;  // neighbor count vectors, enumeration order
  std::vector<double> table;                  // [support_index * n_states + state]
};

struct ExtensiveState {
  int k_cutoff = 0;
  int n_states = 0;
  int t = 0;
  std::vector<JointClass> joints;  // degrees 1..k_cutoff
  std::vector<double> tail;        // tail class keeps a plain state distribution

  // Per-class state marginals in ensemble form (tail passed through).
  MeanFieldEnsemble marginals() const;
};

struct ExtensiveOptions {
  int tail_degree_override = 0;        // > 0 replaces round(E[deg | deg > cutoff])
  int64_t tensor_budget = 10'000'000;  // transition tensors enumerable per step
  int64_t enum_cap = 100000;           // per-class neighborhood support cap
};

// Product initialization: own state mu0, neighbors multinomial from the
// size-biased mixture of mu0 (which is mu0 itself).
ExtensiveState extensive_init(const ProblemSpec& problem, const DegreeDistribution& dist,
                              int k_cutoff, const ExtensiveOptions& options = {});

struct ExtensiveStepResult {
  ExtensiveState next;
  double reward = 0.0;        // mean-field reward of the pre-step marginals
  double renorm_drift = 0.0;  // largest per-class |mass - 1| before renormalizing
};

// One step of the joint dynamics: own-state transition under the class policy
// composed with the neighborhood transition law built from per-neighbor
// conditional degrees and their class transition kernels. Throws
// std::length_error when the transition tensor enumeration exceeds the
// budget and std::invalid_argument for multi-sub-step problems.
ExtensiveStepResult extensive_step(const ExtensiveState& state, const PolicyEnsemble& policy,
                                   const ProblemSpec& problem, const DegreeDistribution& dist,
                                   const ExtensiveOptions& options = {});

struct ExtensiveRolloutResult {
  double objective = 0.0;
  std::vector<MeanFieldEnsemble> trajectory;   // per-class marginals, boundaries 0..T
  std::vector<std::vector<double>> aggregate;  // node-mass mixture per boundary
  std::vector<double> step_rewards;
  double max_renorm_drift = 0.0;
};

ExtensiveRolloutResult extensive_rollout(const ProblemSpec& problem,
                                         const DegreeDistribution& dist, int k_cutoff,
                                         std::span<const PolicyEnsemble> policies,
                                         const ExtensiveOptions& options = {});

}  // namespace mfcnet
