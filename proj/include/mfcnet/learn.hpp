#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfcnet/degree.hpp"
#include "mfcnet/ensemble.hpp"
#include "mfcnet/graph.hpp"
#include "mfcnet/meanfield.hpp"
#include "mfcnet/mlp.hpp"
#include "mfcnet/problems.hpp"
#include "mfcnet/rng.hpp"
#include "mfcnet/simulate.hpp"

namespace mfcnet {

struct TrainConfig {
  double discount = 0.99;
  double gae_lambda = 1.0;
  int train_batch = 4000;
  int minibatch = 1000;
  int epochs_per_batch = 5;
  double clip = 0.2;
  double kl_coeff = 0.2;  // initial penalty weight, adapted toward kl_target
  double kl_target = 0.03;
  double learning_rate = 5e-5;
  double vf_coeff = 1.0;
  int episode_length = 0;  // 0: problem horizon
  int iterations = 0;
  int hidden = 256;
  bool time_feature = false;  // append t / episode_length to the observation
  StepOptions step;           // limiting-dynamics options during training
};

// Maps a flattened ensemble to per-(class, state) action logits; actions are
// drawn from a diagonal Gaussian over the logits and squashed row-wise by
// softmax, with a free state-independent log standard deviation vector.
struct HighLevelPolicy {
  int k_cutoff = 0;
  int n_states = 0;
  int n_actions = 0;
  bool time_feature = false;
  Mlp net;    // observation -> action logits
  Mlp value;  // observation -> state value
  std::vector<double> log_std;

  static HighLevelPolicy make(int k_cutoff, int n_states, int n_actions, int hidden,
                              bool time_feature, uint64_t seed);
  int obs_dim() const { return n_classes(k_cutoff) * n_states + (time_feature ? 1 : 0); }
  int act_dim() const { return n_classes(k_cutoff) * n_states * n_actions; }
};

// Class-major flattening, optionally followed by t / episode_length.
std::vector<double> observe(const HighLevelPolicy& policy, const MeanFieldEnsemble& ensemble,
                            int t, int episode_length);

// Row-wise softmax of the logits into a policy ensemble.
PolicyEnsemble logits_to_ensemble(std::span<const double> logits, int k_cutoff, int n_states,
                                  int n_actions);

struct ActionSample {
  PolicyEnsemble ensemble;
  std::vector<double> raw;   // pre-squash Gaussian draw
  std::vector<double> mean;  // network output the draw was centered at
  double log_prob = 0.0;
};

ActionSample sample_action(HighLevelPolicy& policy, std::span<const double> obs, Rng& rng);
ActionSample sample_action(HighLevelPolicy& policy, std::span<const double> obs, uint64_t seed);

// Deterministic mean action (zero exploration noise).
PolicyEnsemble mean_ensemble(HighLevelPolicy& policy, std::span<const double> obs);

// Reward now, deterministic limiting dynamics next.
std::pair<double, MeanFieldEnsemble> mfc_mdp_step(const MeanFieldEnsemble& ensemble,
                                                  const PolicyEnsemble& action,
                                                  const ProblemSpec& problem,
                                                  const DegreeDistribution& dist,
                                                  const StepOptions& options = {});

struct TransitionRecord {
  std::vector<double> obs;
  std::vector<double> raw_action;
  std::vector<double> behavior_mean;
  std::vector<double> behavior_log_std;
  double log_prob = 0.0;
  double reward = 0.0;
  bool done = false;
  std::vector<double> obs_next;
};

// Generalized advantage estimates over a batch of episode segments cut by
// done flags; the trailing unfinished segment bootstraps with
// bootstrap_value. With lambda = 1 this is the discounted return minus the
// value baseline.
std::vector<double> gae_advantages(std::span<const double> rewards,
                                   std::span<const uint8_t> done,
                                   std::span<const double> values, double bootstrap_value,
                                   double gamma, double lambda);

struct PpoDiagnostics {
  double surrogate = 0.0;
  double kl = 0.0;
  double entropy = 0.0;
  double value_loss = 0.0;
  double total = 0.0;
};

struct Trainer {
  HighLevelPolicy policy;
  TrainConfig config;
  AdamState adam;  // over [net | log_std | value]
  double kl_coeff = 0.2;
  int64_t iteration = 0;
  Rng rng{0};

  size_t n_trainable() const {
    return static_cast<size_t>(policy.net.n_params()) + policy.log_std.size() +
           static_cast<size_t>(policy.value.n_params());
  }
  void gather_params(std::vector<double>& out) const;
  void scatter_params(std::span<const double> in);
};

Trainer make_trainer(const ProblemSpec& problem, int k_cutoff, const TrainConfig& config,
                     uint64_t seed);

// Mean clipped-surrogate + KL-penalty + value loss over the records with the
// advantages and value targets held fixed; accumulates the gradient over
// [net | log_std | value] when grad is non-null. diagnostics, when non-null,
// receives the mean components.
double ppo_loss(Trainer& trainer, std::span<const TransitionRecord> records,
                std::span<const double> advantages, std::span<const double> targets,
                std::vector<double>* grad, PpoDiagnostics* diagnostics = nullptr);

// One optimization round: advantages standardized per batch, epochs over
// shuffled minibatches, Adam steps, then KL-coefficient adaptation.
PpoDiagnostics ppo_update(Trainer& trainer, std::span<const TransitionRecord> batch);

struct CurvePoint {
  int64_t iteration = 0;
  double mean_return = 0.0;
  double return_std = 0.0;
  double kl = 0.0;
  double entropy = 0.0;
};

CurvePoint train_iteration_limiting(Trainer& trainer, const ProblemSpec& problem,
                                    const DegreeDistribution& dist);
CurvePoint train_iteration_graph(Trainer& trainer, const ProblemSpec& problem, const Graph& graph,
                                 const ClassPartition& partition);

// config.iterations rounds of the respective iteration function.
std::vector<CurvePoint> train_limiting(Trainer& trainer, const ProblemSpec& problem,
                                       const DegreeDistribution& dist);
std::vector<CurvePoint> train_on_graph(Trainer& trainer, const ProblemSpec& problem,
                                       const Graph& graph, const ClassPartition& partition);

struct LimitingEval {
  double objective = 0.0;
  std::vector<std::vector<double>> aggregate;  // boundaries 0..T
};

// Closed-loop rollout of the deterministic mean action.
LimitingEval evaluate_limiting(HighLevelPolicy& policy, const ProblemSpec& problem,
                               const DegreeDistribution& dist, const StepOptions& options = {});

struct GraphEval {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<std::vector<double>> mean_aggregate;  // episode-averaged boundaries
};

GraphEval evaluate_on_graph(HighLevelPolicy& policy, const ProblemSpec& problem,
                            const Graph& graph, const ClassPartition& partition, int episodes,
                            uint64_t seed);

// Text checkpoint carrying everything a resumed run needs: dimensions,
// config, parameters, optimizer moments, KL coefficient and RNG state.
void save_trainer(const Trainer& trainer, const std::string& path);
Trainer load_trainer(const std::string& path);

// Columns iteration,mean_return,return_std,kl,entropy.
void write_curve_csv(std::span<const CurvePoint> curve, const std::string& path,
                     const std::string& comment);

}  // namespace mfcnet
