#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mfcnet/ensemble.hpp"

namespace mfcnet {

// A finite-state agent model. The transition kernel sees the agent's state,
// its chosen action, the distribution of its neighbors' states and its
// degree; it must write a probability vector over states that sums to one.
struct ProblemSpec {
  std::string name;
  std::vector<std::string> state_names;
  std::vector<std::string> action_names;
  int horizon = 0;
  std::vector<double> mu0;

  // Kernel applications per decision step. With two sub-steps the state set
  // is extended by (state, action) pairs: the first application records the
  // action, the second resolves it; rewards are evaluated in between.
  int substeps = 1;
  bool reward_uses_neighborhood = false;

  std::function<void(int x, int u, std::span<const double> g, int k, std::span<double> out)>
      kernel;
  std::function<double(int x, int u, std::span<const double> g, std::span<const double> mu)>
      reward;

  int n_states() const { return static_cast<int>(state_names.size()); }
  int n_actions() const { return static_cast<int>(action_names.size()); }
};

struct SisParams {
  double rho_infect = 0.4;
  double rho_recover = 0.1;
  double cost_protect = 0.5;
  double cost_infected = 1.0;
  double mu0_infected = 0.4;
  int horizon = 50;
};
ProblemSpec sis_problem(const SisParams& params = {});

struct SirParams {
  double rho_infect = 0.1;
  double rho_recover = 0.02;
  double cost_protect = 0.25;
  double cost_infected = 1.0;
  double mu0_infected = 0.1;
  int horizon = 50;
};
ProblemSpec sir_problem(const SirParams& params = {});

struct ColorParams {
  double rho_disturb = 0.9;
  double cost_move = 0.1;
  double cost_disagree = 0.5;
  double cost_mismatch = 1.0;
  std::vector<double> target = {0.1, 0.2, 0.4, 0.2, 0.1};
  int horizon = 20;
};
ProblemSpec color_problem(const ColorParams& params = {});

struct RumorParams {
  double rho_aware = 0.3;
  double cost_spread = 16.0;
  double reward_spread = 4.0;
  double mu0_aware = 0.1;
  int horizon = 50;
};
ProblemSpec rumor_problem(const RumorParams& params = {});

ProblemSpec make_problem(const std::string& name);

// Node-mass weighted expected one-step reward of a policy ensemble when each
// class sits at its ensemble distribution and neighborhoods follow g_hat.
double mean_field_reward(const ProblemSpec& problem, const MeanFieldEnsemble& ensemble,
                         const PolicyEnsemble& policy, std::span<const double> g_hat,
                         std::span<const double> node_mass);

// 2 / (1 + exp(-k/2)) - 1: degree-dependent contact attenuation, 0 at k = 0.
double contact_factor(int k);

}  // namespace mfcnet
