#include "mfcnet/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfcnet/csv.hpp"
#include "mfcnet/rng.hpp"

namespace mfcnet {

int64_t count_neighbor_counts(int k, int d) {
  if (k < 0 || d < 1) throw std::invalid_argument("count_neighbor_counts: bad arguments");
  // C(k + d - 1, d - 1) multiplicatively; d <= ~60 keeps this exact in double
  long double v = 1.0L;
  for (int i = 1; i <= d - 1; ++i) v = v * (k + i) / i;
  long double rounded = roundl(v);
  if (rounded > 9.0e18L) return INT64_MAX;
  return static_cast<int64_t>(rounded);
}

std::vector<std::vector<int32_t>> enumerate_neighbor_counts(int k, int d, int64_t cap) {
  int64_t total = count_neighbor_counts(k, d);
  if (total > cap)
    throw std::length_error("enumerate_neighbor_counts: " + std::to_string(total) +
                            " neighborhoods exceed the cap of " + std::to_string(cap) +
                            "; lower the class cutoff or use sampled mode");
  std::vector<std::vector<int32_t>> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<int32_t> cur(d, 0);
  // first coordinate descending, recursively
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == d - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, k);
  return out;
}

namespace {

// log k! table; enumeration keeps k small so 512 entries is generous.
const double* log_factorials() {
  static std::vector<double> table = [] {
    std::vector<double> t(512, 0.0);
    for (size_t i = 2; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  return table.data();
}

}  // namespace

double multinomial_pmf(std::span<const int32_t> counts, std::span<const double> p) {
  const double* lf = log_factorials();
  int k = 0;
  double lp = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    int c = counts[i];
    if (c == 0) continue;
    if (p[i] <= 0.0) return 0.0;
    k += c;
    lp += c * std::log(p[i]) - lf[c];
  }
  if (k >= 512) throw std::invalid_argument("multinomial_pmf: counts too large");
  return std::exp(lp + lf[k]);
}

std::vector<double> neighbor_state_mixture(const MeanFieldEnsemble& ensemble,
                                           std::span<const double> neighbor_mass) {
  std::vector<double> g(ensemble.n_states, 0.0);
  for (int c = 0; c <= ensemble.k_cutoff; ++c) {
    double w = neighbor_mass[c];
    if (w == 0.0) continue;
    for (int x = 0; x < ensemble.n_states; ++x) g[x] += w * ensemble.dist[c][x];
  }
  return g;
}

namespace {

struct StepContext {
  const ProblemSpec& problem;
  const PolicyEnsemble& policy;
  const StepOptions& options;
  ClassMasses cm;
  int k_eff = 0;
  bool tail_active = false;
};

// One kernel application for every class; g_hat is the pre-sub-step mixture.
MeanFieldEnsemble apply_substep(const StepContext& ctx, const MeanFieldEnsemble& ens,
                                const std::vector<double>& g_hat, int substep_tag,
                                SimplexDrift& drift) {
  const ProblemSpec& prob = ctx.problem;
  const int d = prob.n_states();
  const int na = prob.n_actions();
  const int kc = ens.k_cutoff;
  const double* lf = log_factorials();

  std::vector<double> logp(d);
  for (int i = 0; i < d; ++i) logp[i] = g_hat[i] > 0.0 ? std::log(g_hat[i]) : 0.0;

  MeanFieldEnsemble out = ens;
  out.t = ens.t;
  std::vector<double> row(d);
  std::vector<double> gp(d);

  for (int c = 0; c <= kc; ++c) {
    auto& target = out.dist[c];
    std::fill(target.begin(), target.end(), 0.0);
    const auto& src = ens.dist[c];

    auto accumulate = [&](std::span<const double> g, int k, double weight) {
      for (int x = 0; x < d; ++x) {
        if (src[x] == 0.0) continue;
        for (int u = 0; u < na; ++u) {
          double w = weight * src[x] * ctx.policy.prob(c, x, u);
          if (w == 0.0) continue;
          prob.kernel(x, u, g, k, row);
          for (int y = 0; y < d; ++y) target[y] += w * row[y];
        }
      }
    };

    if (c == kc) {
      accumulate(g_hat, ctx.tail_active ? ctx.k_eff : 0, 1.0);
    } else {
      const int k = c + 1;
      if (!ctx.options.sampled) {
        for (const auto& counts : enumerate_neighbor_counts(k, d, ctx.options.enum_cap)) {
          double lw = lf[k];
          bool possible = true;
          for (int i = 0; i < d; ++i) {
            if (counts[i] == 0) continue;
            if (g_hat[i] <= 0.0) {
              possible = false;
              break;
            }
            lw += counts[i] * logp[i] - lf[counts[i]];
          }
          if (!possible) continue;
          double w = std::exp(lw);
          for (int i = 0; i < d; ++i) gp[i] = static_cast<double>(counts[i]) / k;
          accumulate(gp, k, w);
        }
      } else {
        Rng rng = Rng::stream(ctx.options.seed, static_cast<uint64_t>(c),
                              static_cast<uint64_t>(substep_tag));
        const int n = ctx.options.n_samples;
        std::vector<int32_t> counts(d);
        for (int s = 0; s < n; ++s) {
          std::fill(counts.begin(), counts.end(), 0);
          for (int j = 0; j < k; ++j) ++counts[rng.categorical(g_hat)];
          for (int i = 0; i < d; ++i) gp[i] = static_cast<double>(counts[i]) / k;
          accumulate(gp, k, 1.0 / n);
        }
      }
    }
    clip_renormalize(target, drift);
  }
  return out;
}

}  // namespace

StepResult mean_field_step(const MeanFieldEnsemble& ensemble, const PolicyEnsemble& policy,
                           const ProblemSpec& problem, const DegreeDistribution& dist,
                           const StepOptions& options) {
  const int kc = ensemble.k_cutoff;
  if (policy.k_cutoff != kc || policy.n_states != problem.n_states() ||
      ensemble.n_states != problem.n_states())
    throw std::invalid_argument("mean_field_step: mismatched dimensions");

  StepContext ctx{problem, policy, options, dist.class_masses(kc), 0, false};
  ctx.tail_active = ctx.cm.node[kc] > 0.0 || ctx.cm.neighbor[kc] > 0.0;
  if (ctx.tail_active)
    ctx.k_eff = options.tail_degree_override > 0
                    ? options.tail_degree_override
                    : static_cast<int>(std::lround(dist.tail_mean(kc)));

  StepResult res;
  MeanFieldEnsemble cur = ensemble;
  for (int s = 0; s < problem.substeps; ++s) {
    auto g_hat = neighbor_state_mixture(cur, ctx.cm.neighbor);
    // Rewards live at the point where both the state and the chosen action
    // are visible: before the only sub-step, or after the recording one.
    if (s == problem.substeps - 1)
      res.reward = mean_field_reward(problem, cur, policy, g_hat, ctx.cm.node);
    cur = apply_substep(ctx, cur, g_hat, ensemble.t * problem.substeps + s, res.drift);
  }
  if (res.drift.max_negative > 1e-10)
    throw std::logic_error("mean_field_step: clipped probability mass above tolerance");
  cur.t = ensemble.t + 1;
  res.next = std::move(cur);
  return res;
}

RolloutResult mean_field_rollout(const ProblemSpec& problem, const DegreeDistribution& dist,
                                 int k_cutoff, std::span<const PolicyEnsemble> policies,
                                 const StepOptions& options) {
  const int T = problem.horizon;
  if (policies.empty() || (policies.size() != 1 && static_cast<int>(policies.size()) < T))
    throw std::invalid_argument("mean_field_rollout: need one policy or one per step");

  auto cm = dist.class_masses(k_cutoff);
  RolloutResult res;
  MeanFieldEnsemble ens = MeanFieldEnsemble::replicated(problem.mu0, k_cutoff);
  auto push = [&](const MeanFieldEnsemble& e) {
    res.trajectory.push_back(e);
    std::vector<double> agg(problem.n_states(), 0.0);
    for (int c = 0; c <= k_cutoff; ++c)
      for (int x = 0; x < problem.n_states(); ++x) agg[x] += cm.node[c] * e.dist[c][x];
    res.aggregate.push_back(std::move(agg));
  };
  push(ens);
  for (int t = 0; t < T; ++t) {
    const PolicyEnsemble& pol = policies.size() == 1 ? policies[0] : policies[t];
    StepResult sr = mean_field_step(ens, pol, problem, dist, options);
    res.objective += sr.reward;
    res.step_rewards.push_back(sr.reward);
    res.drift.max_negative = std::max(res.drift.max_negative, sr.drift.max_negative);
    res.drift.max_drift = std::max(res.drift.max_drift, sr.drift.max_drift);
    ens = std::move(sr.next);
    push(ens);
  }
  return res;
}

void write_trajectory_csv(const RolloutResult& result,
                          const std::vector<std::string>& state_names,
                          const std::string& path, const std::string& comment) {
  Csv csv(path, comment, "t,class,state,probability");
  for (size_t t = 0; t < result.trajectory.size(); ++t) {
    const auto& ens = result.trajectory[t];
    for (int c = 0; c <= ens.k_cutoff; ++c) {
      std::string label = c == ens.k_cutoff ? "tail" : std::to_string(c + 1);
      for (int x = 0; x < ens.n_states; ++x) {
        csv.field(static_cast<int64_t>(t)).field(label).field(state_names[x]);
        csv.field(ens.dist[c][x]);
        csv.end_row();
      }
    }
    for (int x = 0; x < ens.n_states; ++x) {
      csv.field(static_cast<int64_t>(t)).field("aggregate").field(state_names[x]);
      csv.field(result.aggregate[t][x]);
      csv.end_row();
    }
  }
}

}  // namespace mfcnet
