#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace mfcnet {

// Degree classes are indexed 0..k_cutoff: slot c < k_cutoff holds degree
// c + 1, slot k_cutoff pools every degree above the cutoff ("tail" class).
// Degree-zero nodes are excluded from all ensembles and handled separately.
inline int n_classes(int k_cutoff) { return k_cutoff + 1; }

// One state distribution per degree class.
struct MeanFieldEnsemble {
  int k_cutoff = 0;
  int n_states = 0;
  int t = 0;
  std::vector<std::vector<double>> dist;  // [class][state]

  static MeanFieldEnsemble replicated(std::span<const double> mu0, int k_cutoff) {
    MeanFieldEnsemble e;
    e.k_cutoff = k_cutoff;
    e.n_states = static_cast<int>(mu0.size());
    e.dist.assign(n_classes(k_cutoff), std::vector<double>(mu0.begin(), mu0.end()));
    return e;
  }

  std::vector<double>& cls(int c) { return dist[c]; }
  const std::vector<double>& cls(int c) const { return dist[c]; }
  std::vector<double>& tail() { return dist[k_cutoff]; }
  const std::vector<double>& tail() const { return dist[k_cutoff]; }
};

// One row-stochastic state->action matrix per degree class, row-major.
struct PolicyEnsemble {
  int k_cutoff = 0;
  int n_states = 0;
  int n_actions = 0;
  std::vector<std::vector<double>> rows;  // [class][state * n_actions + action]

  static PolicyEnsemble uniform(int k_cutoff, int n_states, int n_actions) {
    PolicyEnsemble p;
    p.k_cutoff = k_cutoff;
    p.n_states = n_states;
    p.n_actions = n_actions;
    p.rows.assign(n_classes(k_cutoff),
                  std::vector<double>(static_cast<size_t>(n_states) * n_actions,
                                      1.0 / n_actions));
    return p;
  }

  // Same state->action matrix for every class.
  static PolicyEnsemble shared(int k_cutoff, int n_states, int n_actions,
                               std::span<const double> matrix) {
    PolicyEnsemble p = uniform(k_cutoff, n_states, n_actions);
    for (auto& r : p.rows) r.assign(matrix.begin(), matrix.end());
    return p;
  }

  double prob(int c, int x, int u) const { return rows[c][static_cast<size_t>(x) * n_actions + u]; }
  std::span<const double> row(int c, int x) const {
    return {rows[c].data() + static_cast<size_t>(x) * n_actions, static_cast<size_t>(n_actions)};
  }
};

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

struct SimplexDrift {
  double max_negative = 0.0;  // largest clipped |negative entry|
  double max_drift = 0.0;     // largest |sum - 1| seen before renormalizing
};

// Clips tiny negatives and renormalizes in place; records how far the vector
// was from a simplex so callers can assert the drift stayed numerical noise.
inline void clip_renormalize(std::span<double> v, SimplexDrift& drift) {
  double sum = 0.0;
  for (double x : v) sum += x;
  drift.max_drift = std::max(drift.max_drift, std::abs(sum - 1.0));
  double pos = 0.0;
  for (double& x : v) {
    if (x < 0.0) {
      drift.max_negative = std::max(drift.max_negative, -x);
      x = 0.0;
    }
    pos += x;
  }
  if (pos > 0.0)
    for (double& x : v) x /= pos;
}

}  // namespace mfcnet
