#include "mfcnet/extensive.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mfcnet/meanfield.hpp"

namespace mfcnet {

namespace {

double factorial(int n) {
  static const auto table = [] {
    std::array<double, 64> t{};
    t[0] = 1.0;
    for (size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table.at(static_cast<size_t>(n));
}

void table_rows(std::span<const int32_t> row_sums, std::span<const int32_t> col_sums,
                size_t j, std::vector<int32_t>& cells, std::vector<int32_t>& col_rem,
                std::vector<std::vector<int32_t>>& out) {
  const size_t m = col_sums.size();
  if (j == row_sums.size()) {
    for (int32_t rem : col_rem)
      if (rem != 0) return;
    out.push_back(cells);
    return;
  }
  // compositions of row_sums[j] bounded by the remaining column budget,
  // first coordinate descending
  std::vector<int32_t> row(m, 0);
  auto rec = [&](auto&& self, size_t q, int32_t left) -> void {
    if (q + 1 == m) {
      if (left > col_rem[q]) return;
      row[q] = left;
      for (size_t i = 0; i < m; ++i) {
        cells[j * m + i] = row[i];
        col_rem[i] -= row[i];
      }
      table_rows(row_sums, col_sums, j + 1, cells, col_rem, out);
      for (size_t i = 0; i < m; ++i) col_rem[i] += row[i];
      return;
    }
    for (int32_t v = std::min(left, col_rem[q]); v >= 0; --v) {
      row[q] = v;
      self(self, q + 1, left - v);
    }
  };
  rec(rec, 0, row_sums[j]);
}

// Visits every tensor with the given marginals; returns the visit count.
template <class Fn>
int64_t for_each_transition_table(std::span<const int32_t> next, std::span<const int32_t> cur,
                                  std::span<const int32_t> deg, int64_t cap, Fn&& fn) {
  const int d = static_cast<int>(next.size());
  const int m = static_cast<int>(deg.size());
  int64_t tn = 0, tc = 0, td = 0;
  for (int32_t v : next) tn += v;
  for (int32_t v : cur) tc += v;
  for (int32_t v : deg) td += v;
  if (tn != tc || tc != td) return 0;

  std::vector<int32_t> cells(static_cast<size_t>(d) * d * m, 0);
  std::vector<int32_t> rem_i(next.begin(), next.end());
  std::vector<int32_t> rem_j(cur.begin(), cur.end());
  std::vector<int32_t> rem_m(deg.begin(), deg.end());
  int64_t count = 0;
  const int n_cells = d * d * m;

  auto rec = [&](auto&& self, int cell) -> void {
    if (cell == n_cells) {
      for (int32_t v : rem_i)
        if (v != 0) return;
      for (int32_t v : rem_m)
        if (v != 0) return;
      if (++count > cap)
        throw std::length_error("transition table enumeration exceeded the tensor budget");
      fn(std::span<const int32_t>(cells));
      return;
    }
    const int i = cell / (d * m);
    const int j = (cell / m) % d;
    const int q = cell % m;
    int32_t hi = std::min({rem_i[i], rem_j[j], rem_m[q]});
    for (int32_t v = hi; v >= 0; --v) {
      cells[cell] = v;
      rem_i[i] -= v;
      rem_j[j] -= v;
      rem_m[q] -= v;
      self(self, cell + 1);
      rem_i[i] += v;
      rem_j[j] += v;
      rem_m[q] += v;
    }
    cells[cell] = 0;
  };
  rec(rec, 0);
  return count;
}

struct StepContext {
  int d = 0;
  int kc = 0;
  int k_eff = 0;
  bool tail_active = false;
  ClassMasses cm;
  std::vector<double> g_hat;
  // p[j][m] = neighbor_mass[m] * mu^m(j); w[j] its row sum; ptil normalized
  std::vector<std::vector<double>> p, ptil;
  std::vector<double> w;
  // q[m][j][i]: next-state law of a class-m neighbor currently in state j
  std::vector<std::vector<std::vector<double>>> q;
  // p3[j][m][i] = p[j][m] * q[m][j][i]
  std::vector<std::vector<std::vector<double>>> p3;
};

StepContext build_context(const ExtensiveState& state, const PolicyEnsemble& policy,
                          const ProblemSpec& problem, const DegreeDistribution& dist,
                          const ExtensiveOptions& options) {
  StepContext ctx;
  ctx.d = state.n_states;
  ctx.kc = state.k_cutoff;
  ctx.cm = dist.class_masses(ctx.kc);
  ctx.tail_active = ctx.cm.node[ctx.kc] > 0.0 || ctx.cm.neighbor[ctx.kc] > 0.0;
  if (ctx.tail_active)
    ctx.k_eff = options.tail_degree_override > 0
                    ? options.tail_degree_override
                    : static_cast<int>(std::lround(dist.tail_mean(ctx.kc)));

  MeanFieldEnsemble marg = state.marginals();
  ctx.g_hat = neighbor_state_mixture(marg, ctx.cm.neighbor);

  const int d = ctx.d;
  const int nm = ctx.kc + 1;
  ctx.p.assign(d, std::vector<double>(nm, 0.0));
  ctx.ptil = ctx.p;
  ctx.w.assign(d, 0.0);
  for (int j = 0; j < d; ++j) {
    for (int m = 0; m < nm; ++m) {
      ctx.p[j][m] = ctx.cm.neighbor[m] * marg.dist[m][j];
      ctx.w[j] += ctx.p[j][m];
    }
    if (ctx.w[j] > 0.0)
      for (int m = 0; m < nm; ++m) ctx.ptil[j][m] = ctx.p[j][m] / ctx.w[j];
  }

  // Neighbor transition laws. Low classes average their joint's conditional
  // neighborhood; the tail sees the mixture at its effective degree.
  const int na = problem.n_actions();
  ctx.q.assign(nm, std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0)));
  std::vector<double> row(d);
  std::vector<double> g(d);
  for (int m = 0; m < ctx.kc; ++m) {
    const JointClass& jc = state.joints[m];
    const int deg = jc.degree;
    for (size_t gi = 0; gi < jc.support.size(); ++gi) {
      for (int i = 0; i < d; ++i) g[i] = static_cast<double>(jc.support[gi][i]) / deg;
      for (int j = 0; j < d; ++j) {
        double mass = jc.table[gi * d + j];
        if (mass == 0.0) continue;
        for (int u = 0; u < na; ++u) {
          double wu = mass * policy.prob(m, j, u);
          if (wu == 0.0) continue;
          problem.kernel(j, u, g, deg, row);
          for (int i = 0; i < d; ++i) ctx.q[m][j][i] += wu * row[i];
        }
      }
    }
    for (int j = 0; j < d; ++j) {
      double mu = marg.dist[m][j];
      if (mu > 0.0)
        for (int i = 0; i < d; ++i) ctx.q[m][j][i] /= mu;
      else
        std::fill(ctx.q[m][j].begin(), ctx.q[m][j].end(), 0.0);
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int u = 0; u < na; ++u) {
      double pu = policy.prob(ctx.kc, j, u);
      if (pu == 0.0) continue;
      problem.kernel(j, u, ctx.g_hat, ctx.tail_active ? ctx.k_eff : 0, row);
      for (int i = 0; i < d; ++i) ctx.q[ctx.kc][j][i] += pu * row[i];
    }
  }

  ctx.p3.assign(d, std::vector<std::vector<double>>(nm, std::vector<double>(d, 0.0)));
  for (int j = 0; j < d; ++j)
    for (int m = 0; m < nm; ++m)
      for (int i = 0; i < d; ++i) ctx.p3[j][m][i] = ctx.p[j][m] * ctx.q[m][j][i];
  return ctx;
}

}  // namespace

std::vector<std::vector<int32_t>> enumerate_count_tables(std::span<const int32_t> row_sums,
                                                         std::span<const int32_t> col_sums) {
  int64_t tr = 0, tc = 0;
  for (int32_t v : row_sums) tr += v;
  for (int32_t v : col_sums) tc += v;
  std::vector<std::vector<int32_t>> out;
  if (tr != tc) return out;
  std::vector<int32_t> cells(row_sums.size() * col_sums.size(), 0);
  std::vector<int32_t> col_rem(col_sums.begin(), col_sums.end());
  table_rows(row_sums, col_sums, 0, cells, col_rem, out);
  return out;
}

std::vector<std::vector<int32_t>> enumerate_transition_tables(std::span<const int32_t> next,
                                                              std::span<const int32_t> cur,
                                                              std::span<const int32_t> deg) {
  std::vector<std::vector<int32_t>> out;
  for_each_transition_table(next, cur, deg, INT64_MAX, [&](std::span<const int32_t> v) {
    out.emplace_back(v.begin(), v.end());
  });
  return out;
}

std::vector<double> conditional_degree_given_state(const MeanFieldEnsemble& ensemble,
                                                   std::span<const double> neighbor_mass,
                                                   int state) {
  if (neighbor_mass.size() != ensemble.dist.size())
    throw std::invalid_argument("neighbor mass size does not match the class count");
  std::vector<double> out(neighbor_mass.size(), 0.0);
  double w = 0.0;
  for (size_t m = 0; m < out.size(); ++m) {
    out[m] = neighbor_mass[m] * ensemble.dist[m][state];
    w += out[m];
  }
  if (w <= 0.0) throw std::domain_error("state has zero mass in every degree class");
  for (double& v : out) v /= w;
  return out;
}

MeanFieldEnsemble ExtensiveState::marginals() const {
  MeanFieldEnsemble e;
  e.k_cutoff = k_cutoff;
  e.n_states = n_states;
  e.t = t;
  e.dist.assign(k_cutoff + 1, std::vector<double>(n_states, 0.0));
  for (int c = 0; c < k_cutoff; ++c) {
    const JointClass& jc = joints[c];
    for (size_t gi = 0; gi < jc.support.size(); ++gi)
      for (int x = 0; x < n_states; ++x) e.dist[c][x] += jc.table[gi * n_states + x];
  }
  e.dist[k_cutoff] = tail;
  return e;
}

ExtensiveState extensive_init(const ProblemSpec& problem, const DegreeDistribution& dist,
                              int k_cutoff, const ExtensiveOptions& options) {
  if (problem.substeps != 1)
    throw std::invalid_argument("joint neighborhood dynamics support single sub-step problems only");
  if (k_cutoff < 1) throw std::invalid_argument("k_cutoff must be at least 1");
  (void)dist;

  ExtensiveState state;
  state.k_cutoff = k_cutoff;
  state.n_states = problem.n_states();
  state.t = 0;
  state.tail = problem.mu0;
  const int d = state.n_states;
  for (int k = 1; k <= k_cutoff; ++k) {
    JointClass jc;
    jc.degree = k;
    jc.support = enumerate_neighbor_counts(k, d, options.enum_cap);
    jc.table.assign(jc.support.size() * d, 0.0);
    for (size_t gi = 0; gi < jc.support.size(); ++gi) {
      double pg = multinomial_pmf(jc.support[gi], problem.mu0);
      for (int x = 0; x < d; ++x) jc.table[gi * d + x] = problem.mu0[x] * pg;
    }
    state.joints.push_back(std::move(jc));
  }
  return state;
}

ExtensiveStepResult extensive_step(const ExtensiveState& state, const PolicyEnsemble& policy,
                                   const ProblemSpec& problem, const DegreeDistribution& dist,
                                   const ExtensiveOptions& options) {
  if (problem.substeps != 1)
    throw std::invalid_argument("joint neighborhood dynamics support single sub-step problems only");
  const int d = state.n_states;
  if (problem.n_states() != d || policy.n_states != d ||
      policy.n_actions != problem.n_actions() || policy.k_cutoff != state.k_cutoff)
    throw std::invalid_argument("problem, policy and state dimensions do not match");

  StepContext ctx = build_context(state, policy, problem, dist, options);
  const int na = problem.n_actions();
  const int nm = state.k_cutoff + 1;

  ExtensiveStepResult result;
  result.next = state;
  result.next.t = state.t + 1;
  MeanFieldEnsemble marg = state.marginals();
  result.reward = mean_field_reward(problem, marg, policy, ctx.g_hat, ctx.cm.node);

  int64_t budget_left = options.tensor_budget;
  std::vector<double> row(d);
  std::vector<double> g(d);

  for (int c = 0; c < state.k_cutoff; ++c) {
    const JointClass& jc = state.joints[c];
    const int k = jc.degree;
    const size_t ng = jc.support.size();
    std::vector<double>& out = result.next.joints[c].table;
    std::fill(out.begin(), out.end(), 0.0);

    // own-state transition weighted by the joint
    std::vector<double> own(ng * d, 0.0);
    for (size_t gp = 0; gp < ng; ++gp) {
      for (int i = 0; i < d; ++i) g[i] = static_cast<double>(jc.support[gp][i]) / k;
      for (int x = 0; x < d; ++x) {
        double mass = jc.table[gp * d + x];
        if (mass == 0.0) continue;
        for (int u = 0; u < na; ++u) {
          double wu = mass * policy.prob(c, x, u);
          if (wu == 0.0) continue;
          problem.kernel(x, u, g, k, row);
          for (int y = 0; y < d; ++y) own[gp * d + y] += wu * row[y];
        }
      }
    }

    auto comps = enumerate_neighbor_counts(k, nm, options.enum_cap);
    std::vector<double> w_next(ng);
    for (size_t gp = 0; gp < ng; ++gp) {
      double mass0 = 0.0;
      for (int x = 0; x < d; ++x) mass0 += jc.table[gp * d + x];
      if (mass0 == 0.0) continue;
      const std::vector<int32_t>& r = jc.support[gp];
      bool dead = false;
      for (int j = 0; j < d; ++j)
        if (r[j] > 0 && ctx.w[j] <= 0.0) dead = true;
      if (dead) continue;  // zero-mass branch: this neighborhood is dropped

      std::fill(w_next.begin(), w_next.end(), 0.0);
      for (const auto& cvec : comps) {
        auto a2 = enumerate_count_tables(r, cvec);
        if (a2.empty()) continue;
        double term_a = 0.0, den = 0.0;
        for (const auto& t2 : a2) {
          double coef = 1.0, bare = 1.0;
          for (int j = 0; j < d; ++j) {
            double rowc = factorial(r[j]);
            for (int m = 0; m < nm; ++m) {
              int32_t a = t2[static_cast<size_t>(j) * nm + m];
              if (a == 0) continue;
              rowc /= factorial(a);
              for (int32_t e = 0; e < a; ++e) {
                rowc *= ctx.ptil[j][m];
                bare *= ctx.p[j][m];
              }
            }
            coef *= rowc;
          }
          term_a += coef;
          den += bare;
        }
        if (term_a <= 0.0 || den <= 0.0) continue;
        double scale = term_a / den;

        for (size_t gi = 0; gi < ng; ++gi) {
          const std::vector<int32_t>& nx = jc.support[gi];
          double num = 0.0;
          int64_t visited = for_each_transition_table(
              nx, r, cvec, budget_left, [&](std::span<const int32_t> v) {
                double term = 1.0;
                for (int j = 0; j < d && term != 0.0; ++j)
                  for (int m = 0; m < nm && term != 0.0; ++m) {
                    int32_t fiber = 0;
                    for (int i = 0; i < d; ++i) fiber += v[(static_cast<size_t>(i) * d + j) * nm + m];
                    if (fiber == 0) continue;
                    term *= factorial(fiber);
                    for (int i = 0; i < d; ++i) {
                      int32_t a = v[(static_cast<size_t>(i) * d + j) * nm + m];
                      if (a == 0) continue;
                      term /= factorial(a);
                      for (int32_t e = 0; e < a; ++e) term *= ctx.p3[j][m][i];
                    }
                  }
                num += term;
              });
          budget_left -= visited;
          w_next[gi] += scale * num;
        }
      }
      for (size_t gi = 0; gi < ng; ++gi) {
        if (w_next[gi] == 0.0) continue;
        for (int y = 0; y < d; ++y) out[gi * d + y] += own[gp * d + y] * w_next[gi];
      }
    }

    double mass = 0.0;
    for (double v : out) mass += v;
    result.renorm_drift = std::max(result.renorm_drift, std::abs(mass - 1.0));
    if (std::abs(mass - 1.0) >= 1e-6)
      throw std::logic_error("joint class mass drifted beyond tolerance");
    for (double& v : out) v /= mass;
  }

  // tail class follows the limiting map at its effective degree
  std::vector<double> next_tail(d, 0.0);
  for (int x = 0; x < d; ++x) {
    if (state.tail[x] == 0.0) continue;
    for (int u = 0; u < na; ++u) {
      double wu = state.tail[x] * policy.prob(state.k_cutoff, x, u);
      if (wu == 0.0) continue;
      problem.kernel(x, u, ctx.g_hat, ctx.tail_active ? ctx.k_eff : 0, row);
      for (int y = 0; y < d; ++y) next_tail[y] += wu * row[y];
    }
  }
  SimplexDrift sd;
  clip_renormalize(next_tail, sd);
  result.renorm_drift = std::max(result.renorm_drift, sd.max_drift);
  result.next.tail = std::move(next_tail);
  return result;
}

ExtensiveRolloutResult extensive_rollout(const ProblemSpec& problem,
                                         const DegreeDistribution& dist, int k_cutoff,
                                         std::span<const PolicyEnsemble> policies,
                                         const ExtensiveOptions& options) {
  const int T = problem.horizon;
  if (policies.empty() || (policies.size() > 1 && static_cast<int>(policies.size()) < T))
    throw std::invalid_argument("need one policy ensemble or one per decision step");

  auto cm = dist.class_masses(k_cutoff);
  ExtensiveRolloutResult result;
  ExtensiveState state = extensive_init(problem, dist, k_cutoff, options);
  const int d = problem.n_states();

  auto record = [&](const ExtensiveState& s) {
    MeanFieldEnsemble marg = s.marginals();
    std::vector<double> agg(d, 0.0);
    for (int c = 0; c <= k_cutoff; ++c)
      for (int x = 0; x < d; ++x) agg[x] += cm.node[c] * marg.dist[c][x];
    result.trajectory.push_back(std::move(marg));
    result.aggregate.push_back(std::move(agg));
  };

  record(state);
  for (int t = 0; t < T; ++t) {
    const PolicyEnsemble& pol = policies.size() == 1 ? policies[0] : policies[t];
    auto step = extensive_step(state, pol, problem, dist, options);
    result.step_rewards.push_back(step.reward);
    result.objective += step.reward;
    result.max_renorm_drift = std::max(result.max_renorm_drift, step.renorm_drift);
    state = std::move(step.next);
    record(state);
  }
  return result;
}

}  // namespace mfcnet
