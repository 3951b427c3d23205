#include "mfcnet/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfcnet {

double contact_factor(int k) {
  if (k <= 0) return 0.0;
  return 2.0 / (1.0 + std::exp(-0.5 * k)) - 1.0;
}

ProblemSpec sis_problem(const SisParams& params) {
  ProblemSpec p;
  p.name = "sis";
  p.state_names = {"susceptible", "infected"};
  p.action_names = {"protect", "expose"};
  p.horizon = params.horizon;
  p.mu0 = {1.0 - params.mu0_infected, params.mu0_infected};
  p.kernel = [params](int x, int u, std::span<const double> g, int k, std::span<double> out) {
    out[0] = out[1] = 0.0;
    if (x == 0) {
      double q = (u == 1) ? std::min(1.0, params.rho_infect * g[1] * contact_factor(k)) : 0.0;
      out[0] = 1.0 - q;
      out[1] = q;
    } else {
      out[0] = params.rho_recover;
      out[1] = 1.0 - params.rho_recover;
    }
  };
  p.reward = [params](int x, int u, std::span<const double>, std::span<const double>) {
    return -(u == 0 ? params.cost_protect : 0.0) - (x == 1 ? params.cost_infected : 0.0);
  };
  return p;
}

ProblemSpec sir_problem(const SirParams& params) {
  ProblemSpec p;
  p.name = "sir";
  p.state_names = {"susceptible", "infected", "removed"};
  p.action_names = {"protect", "expose"};
  p.horizon = params.horizon;
  p.mu0 = {1.0 - params.mu0_infected, params.mu0_infected, 0.0};
  p.kernel = [params](int x, int u, std::span<const double> g, int k, std::span<double> out) {
    out[0] = out[1] = out[2] = 0.0;
    if (x == 0) {
      double q = (u == 1) ? std::min(1.0, params.rho_infect * g[1] * contact_factor(k)) : 0.0;
      out[0] = 1.0 - q;
      out[1] = q;
    } else if (x == 1) {
      out[1] = 1.0 - params.rho_recover;
      out[2] = params.rho_recover;
    } else {
      out[2] = 1.0;
    }
  };
  p.reward = [params](int x, int u, std::span<const double>, std::span<const double>) {
    return -(u == 0 ? params.cost_protect : 0.0) - (x == 1 ? params.cost_infected : 0.0);
  };
  return p;
}

ProblemSpec color_problem(const ColorParams& params) {
  if (params.target.size() != 5)
    throw std::invalid_argument("color_problem: target distribution needs 5 entries");
  ProblemSpec p;
  p.name = "color";
  p.state_names = {"color0", "color1", "color2", "color3", "color4"};
  p.action_names = {"left", "stay", "right"};
  p.horizon = params.horizon;
  p.mu0 = {1.0, 0.0, 0.0, 0.0, 0.0};
  p.reward_uses_neighborhood = true;
  p.kernel = [params](int x, int u, std::span<const double> g, int k, std::span<double> out) {
    for (auto& v : out) v = 0.0;
    // Disturbance pressure comes from neighbors sharing the current color.
    double d = (k > 0) ? std::min(1.0, g[x] * g[x] * params.rho_disturb * std::exp(-2.0 / k))
                       : 0.0;
    int target = (x + 5 + (u - 1)) % 5;  // u: 0 left, 1 stay, 2 right
    out[target] = 1.0 - d;
    out[(target + 4) % 5] += d / 2.0;
    out[(target + 1) % 5] += d / 2.0;
  };
  p.reward = [params](int x, int u, std::span<const double> g, std::span<const double> mu) {
    double r = (u == 1) ? 0.0 : -params.cost_move;
    r -= (g[(x + 4) % 5] + g[(x + 1) % 5]) * params.cost_disagree;
    double mismatch = 0.0;
    for (int i = 0; i < 5; ++i) mismatch += std::abs(mu[i] - params.target[i]);
    return r - mismatch * params.cost_mismatch;
  };
  return p;
}

ProblemSpec rumor_problem(const RumorParams& params) {
  ProblemSpec p;
  p.name = "rumor";
  // Pair states record the chosen action for one sub-step so that rewards
  // and neighborhood effects can depend on what neighbors are doing.
  p.state_names = {"ignorant", "aware", "ignorant+spread", "ignorant+silent",
                   "aware+spread", "aware+silent"};
  p.action_names = {"spread", "silent"};
  p.horizon = params.horizon;
  p.mu0 = {1.0 - params.mu0_aware, params.mu0_aware, 0.0, 0.0, 0.0, 0.0};
  p.substeps = 2;
  p.reward_uses_neighborhood = true;
  p.kernel = [params](int x, int u, std::span<const double> g, int k, std::span<double> out) {
    for (auto& v : out) v = 0.0;
    switch (x) {
      case 0:  // ignorant picks an action
        out[2 + u] = 1.0;
        break;
      case 1:  // aware picks an action
        out[4 + u] = 1.0;
        break;
      case 2:
      case 3: {  // ignorant pair: hears the rumor from spreading-aware neighbors
        double q = std::min(1.0, params.rho_aware * g[4] * contact_factor(k));
        out[0] = 1.0 - q;
        out[1] = q;
        break;
      }
      default:  // aware pair: stays aware
        out[1] = 1.0;
    }
  };
  p.reward = [params](int x, int u, std::span<const double> g, std::span<const double>) {
    (void)u;
    if (x != 4) return 0.0;  // only spreading-aware agents are scored
    return params.reward_spread * (g[2] + g[3]) - params.cost_spread * (g[4] + g[5]);
  };
  return p;
}

ProblemSpec make_problem(const std::string& name) {
  if (name == "sis") return sis_problem();
  if (name == "sir") return sir_problem();
  if (name == "color") return color_problem();
  if (name == "rumor") return rumor_problem();
  throw std::invalid_argument("make_problem: unknown problem '" + name + "'");
}

double mean_field_reward(const ProblemSpec& problem, const MeanFieldEnsemble& ensemble,
                         const PolicyEnsemble& policy, std::span<const double> g_hat,
                         std::span<const double> node_mass) {
  const int d = problem.n_states();
  std::vector<double> mu_agg(d, 0.0);
  for (int c = 0; c <= ensemble.k_cutoff; ++c)
    for (int x = 0; x < d; ++x) mu_agg[x] += node_mass[c] * ensemble.dist[c][x];
  double total = 0.0;
  for (int c = 0; c <= ensemble.k_cutoff; ++c) {
    if (node_mass[c] == 0.0) continue;
    double class_r = 0.0;
    for (int x = 0; x < d; ++x) {
      double mx = ensemble.dist[c][x];
      if (mx == 0.0) continue;
      for (int u = 0; u < problem.n_actions(); ++u) {
        double pu = policy.prob(c, x, u);
        if (pu == 0.0) continue;
        class_r += mx * pu * problem.reward(x, u, g_hat, mu_agg);
      }
    }
    total += node_mass[c] * class_r;
  }
  return total;
}

}  // namespace mfcnet
