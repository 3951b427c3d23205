#include "mfcnet/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "mfcnet/csv.hpp"

namespace mfcnet {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::runtime_error(std::string(what) + " diverged to non-finite values");
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

HighLevelPolicy HighLevelPolicy::make(int k_cutoff, int n_states, int n_actions, int hidden,
                                      bool time_feature, uint64_t seed) {
  HighLevelPolicy p;
  p.k_cutoff = k_cutoff;
  p.n_states = n_states;
  p.n_actions = n_actions;
  p.time_feature = time_feature;
  p.net = Mlp(p.obs_dim(), p.act_dim(), hidden, hash_mix(seed, 1));
  p.value = Mlp(p.obs_dim(), 1, hidden, hash_mix(seed, 2));
  p.log_std.assign(p.act_dim(), 0.0);
  return p;
}

std::vector<double> observe(const HighLevelPolicy& policy, const MeanFieldEnsemble& ensemble,
                            int t, int episode_length) {
  std::vector<double> obs;
  obs.reserve(policy.obs_dim());
  for (const auto& cls : ensemble.dist) obs.insert(obs.end(), cls.begin(), cls.end());
  if (policy.time_feature)
    obs.push_back(episode_length > 0 ? static_cast<double>(t) / episode_length : 0.0);
  if (static_cast<int>(obs.size()) != policy.obs_dim())
    throw std::invalid_argument("observe: ensemble does not match the policy dimensions");
  return obs;
}

PolicyEnsemble logits_to_ensemble(std::span<const double> logits, int k_cutoff, int n_states,
                                  int n_actions) {
  PolicyEnsemble pol = PolicyEnsemble::uniform(k_cutoff, n_states, n_actions);
  size_t at = 0;
  for (int c = 0; c <= k_cutoff; ++c)
    for (int x = 0; x < n_states; ++x) {
      double hi = logits[at];
      for (int u = 1; u < n_actions; ++u) hi = std::max(hi, logits[at + u]);
      double z = 0.0;
      for (int u = 0; u < n_actions; ++u) z += std::exp(logits[at + u] - hi);
      for (int u = 0; u < n_actions; ++u)
        pol.rows[c][static_cast<size_t>(x) * n_actions + u] = std::exp(logits[at + u] - hi) / z;
      at += n_actions;
    }
  return pol;
}

ActionSample sample_action(HighLevelPolicy& policy, std::span<const double> obs, Rng& rng) {
  ActionSample s;
  s.mean.resize(policy.act_dim());
  policy.net.forward(obs, s.mean);
  check_finite(s.mean, "sample_action: policy network output");
  s.raw.resize(s.mean.size());
  for (size_t i = 0; i < s.raw.size(); ++i)
    s.raw[i] = s.mean[i] + std::exp(policy.log_std[i]) * rng.normal();
  s.log_prob = gaussian_log_prob(s.raw, s.mean, policy.log_std);
  s.ensemble = logits_to_ensemble(s.raw, policy.k_cutoff, policy.n_states, policy.n_actions);
  return s;
}

ActionSample sample_action(HighLevelPolicy& policy, std::span<const double> obs, uint64_t seed) {
  Rng rng(seed);
  return sample_action(policy, obs, rng);
}

PolicyEnsemble mean_ensemble(HighLevelPolicy& policy, std::span<const double> obs) {
  std::vector<double> logits(policy.act_dim());
  policy.net.forward(obs, logits);
  check_finite(logits, "mean_ensemble: policy network output");
  return logits_to_ensemble(logits, policy.k_cutoff, policy.n_states, policy.n_actions);
}

std::pair<double, MeanFieldEnsemble> mfc_mdp_step(const MeanFieldEnsemble& ensemble,
                                                  const PolicyEnsemble& action,
                                                  const ProblemSpec& problem,
                                                  const DegreeDistribution& dist,
                                                  const StepOptions& options) {
  StepResult r = mean_field_step(ensemble, action, problem, dist, options);
  return {r.reward, std::move(r.next)};
}

std::vector<double> gae_advantages(std::span<const double> rewards,
                                   std::span<const uint8_t> done,
                                   std::span<const double> values, double bootstrap_value,
                                   double gamma, double lambda) {
  const size_t n = rewards.size();
  if (done.size() != n || values.size() != n)
    throw std::invalid_argument("gae_advantages: length mismatch");
  std::vector<double> adv(n, 0.0);
  double carry = 0.0;
  for (size_t idx = n; idx-- > 0;) {
    double v_next = done[idx] ? 0.0 : (idx + 1 == n ? bootstrap_value : values[idx + 1]);
    if (done[idx]) carry = 0.0;
    double delta = rewards[idx] + gamma * v_next - values[idx];
    carry = delta + gamma * lambda * carry;
    adv[idx] = carry;
  }
  return adv;
}

void Trainer::gather_params(std::vector<double>& out) const {
  out.clear();
  out.reserve(n_trainable());
  auto np = policy.net.params();
  out.insert(out.end(), np.begin(), np.end());
  out.insert(out.end(), policy.log_std.begin(), policy.log_std.end());
  auto vp = policy.value.params();
  out.insert(out.end(), vp.begin(), vp.end());
}

void Trainer::scatter_params(std::span<const double> in) {
  if (in.size() != n_trainable()) throw std::invalid_argument("scatter_params: size mismatch");
  size_t at = 0;
  auto np = policy.net.params();
  std::copy(in.begin(), in.begin() + np.size(), np.begin());
  at += np.size();
  std::copy(in.begin() + at, in.begin() + at + policy.log_std.size(), policy.log_std.begin());
  at += policy.log_std.size();
  auto vp = policy.value.params();
  std::copy(in.begin() + at, in.end(), vp.begin());
}

Trainer make_trainer(const ProblemSpec& problem, int k_cutoff, const TrainConfig& config,
                     uint64_t seed) {
  Trainer t;
  t.policy = HighLevelPolicy::make(k_cutoff, problem.n_states(), problem.n_actions(),
                                   config.hidden, config.time_feature, hash_mix(seed, 11));
  t.config = config;
  t.adam.init(t.n_trainable(), config.learning_rate);
  t.kl_coeff = config.kl_coeff;
  t.rng = Rng(hash_mix(seed, 12));
  return t;
}

double ppo_loss(Trainer& trainer, std::span<const TransitionRecord> records,
                std::span<const double> advantages, std::span<const double> targets,
                std::vector<double>* grad, PpoDiagnostics* diagnostics) {
  const size_t n = records.size();
  if (advantages.size() != n || targets.size() != n)
    throw std::invalid_argument("ppo_loss: advantage/target length mismatch");
  HighLevelPolicy& pol = trainer.policy;
  const int ad = pol.act_dim();
  const size_t net_n = static_cast<size_t>(pol.net.n_params());
  const size_t std_n = pol.log_std.size();
  const double clip = trainer.config.clip;
  const double kl_coeff = trainer.kl_coeff;
  const double vf_coeff = trainer.config.vf_coeff;

  if (grad) {
    grad->assign(trainer.n_trainable(), 0.0);
  }
  PpoDiagnostics diag;
  std::vector<double> mean(ad), dmean(ad), vout(1), dvout(1);
  const double inv_n = 1.0 / static_cast<double>(n);

  for (const TransitionRecord& rec : records) {
    pol.net.forward(rec.obs, mean);
    double lp_new = gaussian_log_prob(rec.raw_action, mean, pol.log_std);
    double ratio = std::exp(lp_new - rec.log_prob);
    double a = advantages[&rec - records.data()];
    double s1 = ratio * a;
    double s2 = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * a;
    double surr = -std::min(s1, s2);
    double kl = gaussian_kl(rec.behavior_mean, rec.behavior_log_std, mean, pol.log_std);

    diag.surrogate += surr * inv_n;
    diag.kl += kl * inv_n;

    double vloss = 0.0;
    double v = 0.0;
    double target = targets[&rec - records.data()];
    pol.value.forward(rec.obs, vout);
    v = vout[0];
    vloss = (v - target) * (v - target);
    diag.value_loss += vloss * inv_n;

    if (grad) {
      double dlp = (s1 <= s2) ? -s1 : 0.0;  // clipped branch has zero slope
      std::fill(dmean.begin(), dmean.end(), 0.0);
      for (int i = 0; i < ad; ++i) {
        double sig2 = std::exp(2.0 * pol.log_std[i]);
        double diff = rec.raw_action[i] - mean[i];
        // surrogate through the new log-density
        dmean[i] += dlp * (diff / sig2) * inv_n;
        (*grad)[net_n + i] += dlp * (diff * diff / sig2 - 1.0) * inv_n;
        // KL(old || new) penalty
        double so2 = std::exp(2.0 * rec.behavior_log_std[i]);
        double dm = mean[i] - rec.behavior_mean[i];
        dmean[i] += kl_coeff * (dm / sig2) * inv_n;
        (*grad)[net_n + i] += kl_coeff * (1.0 - (so2 + dm * dm) / sig2) * inv_n;
      }
      pol.net.backward(dmean, std::span<double>(grad->data(), net_n));
      dvout[0] = vf_coeff * 2.0 * (v - target) * inv_n;
      pol.value.backward(dvout, std::span<double>(grad->data() + net_n + std_n,
                                                  static_cast<size_t>(pol.value.n_params())));
    }
  }
  diag.entropy = gaussian_entropy(pol.log_std);
  diag.total = diag.surrogate + kl_coeff * diag.kl + vf_coeff * diag.value_loss;
  if (diagnostics) *diagnostics = diag;
  return diag.total;
}

PpoDiagnostics ppo_update(Trainer& trainer, std::span<const TransitionRecord> batch) {
  const size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("ppo_update: empty batch");
  HighLevelPolicy& pol = trainer.policy;

  // value baseline and GAE with the pre-update critic
  std::vector<double> values(n), rewards(n);
  std::vector<uint8_t> done(n);
  std::vector<double> vout(1);
  for (size_t i = 0; i < n; ++i) {
    pol.value.forward(batch[i].obs, vout);
    values[i] = vout[0];
    rewards[i] = batch[i].reward;
    done[i] = batch[i].done ? 1 : 0;
  }
  double bootstrap = 0.0;
  if (!batch[n - 1].done) {
    pol.value.forward(batch[n - 1].obs_next, vout);
    bootstrap = vout[0];
  }
  std::vector<double> adv = gae_advantages(rewards, done, values, bootstrap,
                                           trainer.config.discount, trainer.config.gae_lambda);
  std::vector<double> targets(n);
  for (size_t i = 0; i < n; ++i) targets[i] = adv[i] + values[i];

  double am = mean_of(adv);
  double sq = 0.0;
  for (double a : adv) sq += (a - am) * (a - am);
  double astd = std::sqrt(sq / static_cast<double>(n));
  if (astd > 1e-8)
    for (double& a : adv) a = (a - am) / astd;

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<TransitionRecord> mb;
  std::vector<double> mb_adv, mb_tgt, grad, params;
  const size_t mb_size = std::min<size_t>(trainer.config.minibatch, n);

  for (int epoch = 0; epoch < trainer.config.epochs_per_batch; ++epoch) {
    for (size_t i = n; i > 1; --i) {
      size_t j = static_cast<size_t>(trainer.rng.uniform() * i);
      std::swap(order[i - 1], order[std::min(j, i - 1)]);
    }
    for (size_t start = 0; start + mb_size <= n; start += mb_size) {
      mb.clear();
      mb_adv.clear();
      mb_tgt.clear();
      for (size_t idx = start; idx < start + mb_size; ++idx) {
        mb.push_back(batch[order[idx]]);
        mb_adv.push_back(adv[order[idx]]);
        mb_tgt.push_back(targets[order[idx]]);
      }
      double loss = ppo_loss(trainer, mb, mb_adv, mb_tgt, &grad);
      if (!std::isfinite(loss))
        throw std::runtime_error("ppo_update: loss diverged to " + std::to_string(loss));
      trainer.gather_params(params);
      trainer.adam.update(params, grad);
      trainer.scatter_params(params);
    }
  }

  PpoDiagnostics diag;
  ppo_loss(trainer, batch, adv, targets, nullptr, &diag);
  if (!std::isfinite(diag.total))
    throw std::runtime_error("ppo_update: post-update loss diverged");
  if (diag.kl > 2.0 * trainer.config.kl_target)
    trainer.kl_coeff *= 1.5;
  else if (diag.kl < trainer.config.kl_target / 2.0)
    trainer.kl_coeff /= 1.5;
  return diag;
}

namespace {

CurvePoint summarize(Trainer& trainer, const PpoDiagnostics& diag,
                     const std::vector<double>& episode_returns, double partial_return,
                     bool any_complete) {
  CurvePoint pt;
  pt.iteration = trainer.iteration;
  if (any_complete) {
    pt.mean_return = mean_of(episode_returns);
    pt.return_std = std_of(episode_returns, pt.mean_return);
  } else {
    pt.mean_return = partial_return;
  }
  pt.kl = diag.kl;
  pt.entropy = diag.entropy;
  return pt;
}

}  // namespace

CurvePoint train_iteration_limiting(Trainer& trainer, const ProblemSpec& problem,
                                    const DegreeDistribution& dist) {
  const int B = trainer.config.episode_length > 0 ? trainer.config.episode_length
                                                  : problem.horizon;
  std::vector<TransitionRecord> records;
  records.reserve(trainer.config.train_batch);
  std::vector<double> episode_returns;
  double ep_return = 0.0;

  MeanFieldEnsemble ens = MeanFieldEnsemble::replicated(problem.mu0, trainer.policy.k_cutoff);
  int t = 0;
  StepOptions so = trainer.config.step;
  while (static_cast<int>(records.size()) < trainer.config.train_batch) {
    if (so.sampled) so.seed = trainer.rng.next();
    TransitionRecord rec;
    rec.obs = observe(trainer.policy, ens, t, B);
    ActionSample as = sample_action(trainer.policy, rec.obs, trainer.rng);
    auto [reward, next] = mfc_mdp_step(ens, as.ensemble, problem, dist, so);
    rec.raw_action = std::move(as.raw);
    rec.behavior_mean = std::move(as.mean);
    rec.behavior_log_std = trainer.policy.log_std;
    rec.log_prob = as.log_prob;
    rec.reward = reward;
    rec.done = t + 1 == B;
    rec.obs_next = observe(trainer.policy, next, t + 1, B);
    records.push_back(std::move(rec));
    ep_return += reward;
    if (t + 1 == B) {
      episode_returns.push_back(ep_return);
      ep_return = 0.0;
      ens = MeanFieldEnsemble::replicated(problem.mu0, trainer.policy.k_cutoff);
      t = 0;
    } else {
      ens = std::move(next);
      ++t;
    }
  }
  PpoDiagnostics diag = ppo_update(trainer, records);
  ++trainer.iteration;
  return summarize(trainer, diag, episode_returns, ep_return, !episode_returns.empty());
}

CurvePoint train_iteration_graph(Trainer& trainer, const ProblemSpec& problem, const Graph& graph,
                                 const ClassPartition& partition) {
  const int B = trainer.config.episode_length > 0 ? trainer.config.episode_length
                                                  : problem.horizon;
  const int d = problem.n_states();
  std::vector<TransitionRecord> records;
  records.reserve(trainer.config.train_batch);
  std::vector<double> episode_returns;
  double ep_return = 0.0;

  uint64_t ep_seed = trainer.rng.next();
  std::vector<int> states = init_system(problem, graph, ep_seed);
  int t = 0;
  while (static_cast<int>(records.size()) < trainer.config.train_batch) {
    TransitionRecord rec;
    rec.obs = observe(trainer.policy, empirical_mean_field(states, partition, d).ensemble, t, B);
    ActionSample as = sample_action(trainer.policy, rec.obs, trainer.rng);
    double reward = advance_system(states, problem, graph, partition, as.ensemble, ep_seed, t);
    rec.raw_action = std::move(as.raw);
    rec.behavior_mean = std::move(as.mean);
    rec.behavior_log_std = trainer.policy.log_std;
    rec.log_prob = as.log_prob;
    rec.reward = reward;
    rec.done = t + 1 == B;
    rec.obs_next =
        observe(trainer.policy, empirical_mean_field(states, partition, d).ensemble, t + 1, B);
    records.push_back(std::move(rec));
    ep_return += reward;
    if (t + 1 == B) {
      episode_returns.push_back(ep_return);
      ep_return = 0.0;
      ep_seed = trainer.rng.next();
      states = init_system(problem, graph, ep_seed);
      t = 0;
    } else {
      ++t;
    }
  }
  PpoDiagnostics diag = ppo_update(trainer, records);
  ++trainer.iteration;
  return summarize(trainer, diag, episode_returns, ep_return, !episode_returns.empty());
}

std::vector<CurvePoint> train_limiting(Trainer& trainer, const ProblemSpec& problem,
                                       const DegreeDistribution& dist) {
  std::vector<CurvePoint> curve;
  for (int i = 0; i < trainer.config.iterations; ++i)
    curve.push_back(train_iteration_limiting(trainer, problem, dist));
  return curve;
}

std::vector<CurvePoint> train_on_graph(Trainer& trainer, const ProblemSpec& problem,
                                       const Graph& graph, const ClassPartition& partition) {
  std::vector<CurvePoint> curve;
  for (int i = 0; i < trainer.config.iterations; ++i)
    curve.push_back(train_iteration_graph(trainer, problem, graph, partition));
  return curve;
}

LimitingEval evaluate_limiting(HighLevelPolicy& policy, const ProblemSpec& problem,
                               const DegreeDistribution& dist, const StepOptions& options) {
  auto cm = dist.class_masses(policy.k_cutoff);
  const int d = problem.n_states();
  MeanFieldEnsemble ens = MeanFieldEnsemble::replicated(problem.mu0, policy.k_cutoff);
  LimitingEval out;
  auto push = [&](const MeanFieldEnsemble& e) {
    std::vector<double> agg(d, 0.0);
    for (int c = 0; c <= policy.k_cutoff; ++c)
      for (int x = 0; x < d; ++x) agg[x] += cm.node[c] * e.dist[c][x];
    out.aggregate.push_back(std::move(agg));
  };
  push(ens);
  for (int t = 0; t < problem.horizon; ++t) {
    PolicyEnsemble pi = mean_ensemble(policy, observe(policy, ens, t, problem.horizon));
    auto [reward, next] = mfc_mdp_step(ens, pi, problem, dist, options);
    out.objective += reward;
    ens = std::move(next);
    push(ens);
  }
  return out;
}

GraphEval evaluate_on_graph(HighLevelPolicy& policy, const ProblemSpec& problem,
                            const Graph& graph, const ClassPartition& partition, int episodes,
                            uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("evaluate_on_graph: need at least one episode");
  const int d = problem.n_states();
  GraphEval out;
  out.mean_aggregate.assign(problem.horizon + 1, std::vector<double>(d, 0.0));
  std::vector<double> returns;
  for (int e = 0; e < episodes; ++e) {
    uint64_t ep_seed = hash_mix(seed, static_cast<uint64_t>(e));
    std::vector<int> states = init_system(problem, graph, ep_seed);
    double ep_return = 0.0;
    auto field = empirical_mean_field(states, partition, d);
    for (int x = 0; x < d; ++x) out.mean_aggregate[0][x] += field.aggregate[x] / episodes;
    for (int t = 0; t < problem.horizon; ++t) {
      PolicyEnsemble pi =
          mean_ensemble(policy, observe(policy, field.ensemble, t, problem.horizon));
      ep_return += advance_system(states, problem, graph, partition, pi, ep_seed, t);
      field = empirical_mean_field(states, partition, d);
      for (int x = 0; x < d; ++x) out.mean_aggregate[t + 1][x] += field.aggregate[x] / episodes;
    }
    returns.push_back(ep_return);
  }
  out.mean = mean_of(returns);
  double sd = std_of(returns, out.mean);
  out.std_error = returns.size() > 1 ? sd / std::sqrt(static_cast<double>(returns.size())) : 0.0;
  return out;
}

namespace {

void write_vector(std::ofstream& out, const char* name, std::span<const double> v) {
  out << name << ' ' << v.size();
  for (double x : v) out << ' ' << format_double(x);
  out << '\n';
}

std::vector<double> read_vector(std::ifstream& in, const std::string& expect) {
  std::string name;
  size_t n = 0;
  if (!(in >> name >> n) || name != expect)
    throw std::runtime_error("checkpoint: expected section '" + expect + "'");
  std::vector<double> v(n);
  for (double& x : v)
    if (!(in >> x)) throw std::runtime_error("checkpoint: truncated section '" + expect + "'");
  return v;
}

}  // namespace

void save_trainer(const Trainer& trainer, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const HighLevelPolicy& p = trainer.policy;
  const TrainConfig& c = trainer.config;
  out << "mfcnet-trainer 1\n";
  out << "dims " << p.k_cutoff << ' ' << p.n_states << ' ' << p.n_actions << ' '
      << p.net.hidden_dim() << ' ' << (p.time_feature ? 1 : 0) << '\n';
  out << "config " << format_double(c.discount) << ' ' << format_double(c.gae_lambda) << ' '
      << c.train_batch << ' ' << c.minibatch << ' ' << c.epochs_per_batch << ' '
      << format_double(c.clip) << ' ' << format_double(c.kl_coeff) << ' '
      << format_double(c.kl_target) << ' ' << format_double(c.learning_rate) << ' '
      << format_double(c.vf_coeff) << ' ' << c.episode_length << ' ' << c.iterations << ' '
      << c.hidden << '\n';
  out << "step " << (c.step.sampled ? 1 : 0) << ' ' << c.step.n_samples << ' ' << c.step.seed
      << ' ' << c.step.tail_degree_override << ' ' << c.step.enum_cap << '\n';
  out << "progress " << trainer.iteration << ' ' << format_double(trainer.kl_coeff) << ' '
      << trainer.adam.step << '\n';
  auto words = trainer.rng.serialize();
  out << "rng " << words[0] << ' ' << words[1] << ' ' << words[2] << ' ' << words[3] << '\n';
  write_vector(out, "net", p.net.params());
  write_vector(out, "log_std", p.log_std);
  write_vector(out, "value", p.value.params());
  write_vector(out, "adam_m", trainer.adam.m);
  write_vector(out, "adam_v", trainer.adam.v);
  if (!out) throw std::runtime_error("failed writing checkpoint " + path);
}

Trainer load_trainer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "mfcnet-trainer" || version != 1)
    throw std::runtime_error("not a trainer checkpoint: " + path);
  std::string key;
  int kc, d, na, hidden, timef;
  if (!(in >> key >> kc >> d >> na >> hidden >> timef) || key != "dims")
    throw std::runtime_error("checkpoint: bad dims section");
  TrainConfig c;
  int sampled;
  if (!(in >> key >> c.discount >> c.gae_lambda >> c.train_batch >> c.minibatch >>
        c.epochs_per_batch >> c.clip >> c.kl_coeff >> c.kl_target >> c.learning_rate >>
        c.vf_coeff >> c.episode_length >> c.iterations >> c.hidden) ||
      key != "config")
    throw std::runtime_error("checkpoint: bad config section");
  if (!(in >> key >> sampled >> c.step.n_samples >> c.step.seed >> c.step.tail_degree_override >>
        c.step.enum_cap) ||
      key != "step")
    throw std::runtime_error("checkpoint: bad step section");
  c.step.sampled = sampled != 0;
  c.time_feature = timef != 0;

  Trainer t;
  t.policy = HighLevelPolicy::make(kc, d, na, hidden, timef != 0, 0);
  t.config = c;
  if (!(in >> key >> t.iteration >> t.kl_coeff >> t.adam.step) || key != "progress")
    throw std::runtime_error("checkpoint: bad progress section");
  std::array<uint64_t, 4> words{};
  if (!(in >> key >> words[0] >> words[1] >> words[2] >> words[3]) || key != "rng")
    throw std::runtime_error("checkpoint: bad rng section");
  t.rng.deserialize(words);

  auto net = read_vector(in, "net");
  auto ls = read_vector(in, "log_std");
  auto val = read_vector(in, "value");
  if (net.size() != static_cast<size_t>(t.policy.net.n_params()) ||
      ls.size() != t.policy.log_std.size() ||
      val.size() != static_cast<size_t>(t.policy.value.n_params()))
    throw std::runtime_error("checkpoint: parameter sizes do not match the dimensions");
  std::copy(net.begin(), net.end(), t.policy.net.params().begin());
  t.policy.log_std = std::move(ls);
  std::copy(val.begin(), val.end(), t.policy.value.params().begin());
  auto restore_step = t.adam.step;
  t.adam.init(t.n_trainable(), c.learning_rate);
  t.adam.step = restore_step;
  t.adam.m = read_vector(in, "adam_m");
  t.adam.v = read_vector(in, "adam_v");
  if (t.adam.m.size() != t.n_trainable() || t.adam.v.size() != t.n_trainable())
    throw std::runtime_error("checkpoint: optimizer sizes do not match the dimensions");
  return t;
}

void write_curve_csv(std::span<const CurvePoint> curve, const std::string& path,
                     const std::string& comment) {
  Csv csv(path, comment, "iteration,mean_return,return_std,kl,entropy");
  for (const CurvePoint& pt : curve) {
    csv.field(pt.iteration)
        .field(pt.mean_return)
        .field(pt.return_std)
        .field(pt.kl)
        .field(pt.entropy);
    csv.end_row();
  }
}

}  // namespace mfcnet
