#include "mfcnet/commands.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mfcnet/csv.hpp"
#include "mfcnet/extensive.hpp"
#include "mfcnet/meanfield.hpp"
#include "mfcnet/simulate.hpp"

namespace mfcnet {

namespace {

// Degree law seen by limiting-only commands: the empirical law of the
// referenced file when one is given, the configured law otherwise.
DegreeDistribution limiting_distribution(const ExperimentConfig& config) {
  if (config.graph.source == "file") {
    Graph g = load_edge_list(config.graph.path);
    auto degrees = g.degree_sequence();
    return DegreeDistribution::empirical(degrees);
  }
  return config_distribution(config);
}

void check_checkpoint_dims(const Trainer& trainer, const ExperimentConfig& config) {
  const HighLevelPolicy& p = trainer.policy;
  if (p.n_states != config.problem.n_states() || p.n_actions != config.problem.n_actions())
    throw ConfigError("checkpoint trained for " + std::to_string(p.n_states) + " states / " +
                      std::to_string(p.n_actions) + " actions, config problem has " +
                      std::to_string(config.problem.n_states()) + " / " +
                      std::to_string(config.problem.n_actions()));
  if (p.k_cutoff != config.k_star)
    throw ConfigError("checkpoint cutoff " + std::to_string(p.k_cutoff) +
                      " differs from k_star " + std::to_string(config.k_star));
}

// A checkpoint policy reacts to the limiting state, which evolves
// deterministically; unrolling it once yields the per-step ensemble sequence
// that fixed-policy consumers (rollouts, finite simulations) replay.
std::vector<PolicyEnsemble> unroll_checkpoint(Trainer& trainer, const ProblemSpec& problem,
                                              const DegreeDistribution& dist,
                                              const StepOptions& options) {
  auto ens = MeanFieldEnsemble::replicated(problem.mu0, trainer.policy.k_cutoff);
  std::vector<PolicyEnsemble> policies;
  policies.reserve(problem.horizon);
  for (int t = 0; t < problem.horizon; ++t) {
    auto obs = observe(trainer.policy, ens, t, problem.horizon);
    policies.push_back(mean_ensemble(trainer.policy, obs));
    ens = mean_field_step(ens, policies.back(), problem, dist, options).next;
  }
  return policies;
}

std::vector<PolicyEnsemble> resolve_policies(const ExperimentConfig& config,
                                             const DegreeDistribution& dist) {
  if (config.policy.source == "uniform")
    return {PolicyEnsemble::uniform(config.k_star, config.problem.n_states(),
                                    config.problem.n_actions())};
  Trainer trainer = load_trainer(config.policy.path);
  check_checkpoint_dims(trainer, config);
  return unroll_checkpoint(trainer, config.problem, dist, config_step_options(config));
}

ExtensiveOptions extensive_options(const ExperimentConfig& config) {
  ExtensiveOptions opts;
  opts.tail_degree_override = config.extensive.tail_degree;
  opts.tensor_budget = config.extensive.tensor_budget;
  return opts;
}

void write_rollout_artifacts(const ExperimentConfig& config, const RolloutResult& result,
                             const std::string& trajectory_name, const std::string& summary_name,
                             double drift) {
  write_trajectory_csv(result, config.problem.state_names,
                       output_path(config, trajectory_name), config_comment(config));
  Csv summary(output_path(config, summary_name), config_comment(config),
              "objective,horizon,max_drift");
  summary.field(result.objective)
      .field(static_cast<int64_t>(result.step_rewards.size()))
      .field(drift);
  summary.end_row();
}

double sample_std(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0));
}

std::vector<std::vector<double>> episode_aggregates(const EpisodeResult& episode) {
  std::vector<std::vector<double>> out;
  out.reserve(episode.trajectory.size());
  for (const auto& field : episode.trajectory) out.push_back(field.aggregate);
  return out;
}

}  // namespace

void cmd_sample_graph(const ExperimentConfig& config) {
  if (config.graph.source != "sample")
    throw ConfigError("sample-graph requires graph.source = sample");
  Graph g = config_graph(config);
  std::string edge_path = output_path(config, "graph.txt");
  save_edge_list(g, edge_path);

  auto degrees = g.degree_sequence();
  int64_t max_degree = 0;
  for (int64_t d : degrees) max_degree = std::max(max_degree, d);
  std::vector<int64_t> counts(max_degree + 1, 0);
  for (int64_t d : degrees) ++counts[d];

  Csv hist(output_path(config, "degree_histogram.csv"), config_comment(config), "degree,count");
  for (int64_t d = 0; d <= max_degree; ++d) {
    if (counts[d] == 0) continue;
    hist.field(d).field(counts[d]);
    hist.end_row();
  }
  std::printf("sampled graph: %d nodes, %lld edges -> %s, degree_histogram.csv\n", g.n(),
              static_cast<long long>(g.edges), edge_path.c_str());
}

void cmd_mf_rollout(const ExperimentConfig& config) {
  DegreeDistribution dist = limiting_distribution(config);
  auto policies = resolve_policies(config, dist);
  auto result = mean_field_rollout(config.problem, dist, config.k_star, policies,
                                   config_step_options(config));
  write_rollout_artifacts(config, result, "mf_trajectory.csv", "mf_summary.csv",
                          result.drift.max_drift);
  std::printf("two-systems rollout: objective %.6f -> mf_trajectory.csv, mf_summary.csv\n",
              result.objective);
}

void cmd_extensive_rollout(const ExperimentConfig& config) {
  DegreeDistribution dist = limiting_distribution(config);
  auto policies = resolve_policies(config, dist);
  auto result =
      extensive_rollout(config.problem, dist, config.k_star, policies, extensive_options(config));
  RolloutResult shaped;
  shaped.objective = result.objective;
  shaped.trajectory = result.trajectory;
  shaped.aggregate = result.aggregate;
  shaped.step_rewards = result.step_rewards;
  write_rollout_artifacts(config, shaped, "extensive_trajectory.csv", "extensive_summary.csv",
                          result.max_renorm_drift);
  std::printf("extensive rollout: objective %.6f -> extensive_trajectory.csv\n",
              result.objective);
}

void cmd_compare(const ExperimentConfig& config) {
  Graph g = config_graph(config);
  ClassPartition partition = partition_classes(g, config.k_star);
  auto degrees = g.degree_sequence();
  DegreeDistribution dist = DegreeDistribution::empirical(degrees);
  auto policies = resolve_policies(config, dist);
  StepOptions step = config_step_options(config);

  auto limit = mean_field_rollout(config.problem, dist, config.k_star, policies, step);

  bool extensive_ok = false;
  std::string extensive_reason;
  ExtensiveRolloutResult ext;
  if (config.extensive.enabled) {
    try {
      ext = extensive_rollout(config.problem, dist, config.k_star, policies,
                              extensive_options(config));
      extensive_ok = true;
    } catch (const std::invalid_argument& e) {
      extensive_reason = e.what();
    } catch (const std::length_error& e) {
      extensive_reason = e.what();
    }
  }

  std::vector<double> dmu_two, dmu_ext, objectives;
  std::vector<std::vector<double>> mean_aggregate(limit.aggregate.size());
  for (auto& row : mean_aggregate) row.assign(config.problem.n_states(), 0.0);
  for (int trial = 0; trial < config.trials; ++trial) {
    auto episode = simulate_episode(config.problem, g, partition, policies,
                                    hash_mix(config.seed, 1000 + trial));
    auto emp = episode_aggregates(episode);
    dmu_two.push_back(mean_total_variation(emp, limit.aggregate));
    if (extensive_ok) dmu_ext.push_back(mean_total_variation(emp, ext.aggregate));
    objectives.push_back(episode.objective);
    for (size_t t = 0; t < emp.size(); ++t)
      for (int x = 0; x < config.problem.n_states(); ++x)
        mean_aggregate[t][x] += emp[t][x] / config.trials;
  }

  {
    Csv trials_csv(output_path(config, "compare_trials.csv"), config_comment(config),
                   "method,trial,dmu,objective");
    for (int trial = 0; trial < config.trials; ++trial) {
      trials_csv.field("two_systems").field(trial).field(dmu_two[trial]).field(
          objectives[trial]);
      trials_csv.end_row();
    }
    for (size_t trial = 0; trial < dmu_ext.size(); ++trial) {
      trials_csv.field("extensive")
          .field(static_cast<int>(trial))
          .field(dmu_ext[trial])
          .field(objectives[trial]);
      trials_csv.end_row();
    }
  }

  double mean_two = 0.0;
  for (double d : dmu_two) mean_two += d / config.trials;
  {
    Csv summary(output_path(config, "compare_summary.csv"), config_comment(config),
                "method,status,mean_dmu,std_dmu,trials");
    summary.field("two_systems")
        .field("ok")
        .field(mean_two)
        .field(sample_std(dmu_two, mean_two))
        .field(config.trials);
    summary.end_row();
    if (config.extensive.enabled) {
      if (extensive_ok) {
        double mean_ext = 0.0;
        for (double d : dmu_ext) mean_ext += d / config.trials;
        summary.field("extensive")
            .field("ok")
            .field(mean_ext)
            .field(sample_std(dmu_ext, mean_ext))
            .field(config.trials);
      } else {
        summary.field("extensive").field("skipped").field("").field("").field(0);
      }
      summary.end_row();
    }
  }

  {
    Csv traj(output_path(config, "compare_trajectories.csv"), config_comment(config),
             "method,t,state,probability");
    auto write_method = [&](const char* method, std::span<const std::vector<double>> rows) {
      for (size_t t = 0; t < rows.size(); ++t)
        for (int x = 0; x < config.problem.n_states(); ++x) {
          traj.field(method)
              .field(static_cast<int64_t>(t))
              .field(config.problem.state_names[x])
              .field(rows[t][x]);
          traj.end_row();
        }
    };
    write_method("empirical", mean_aggregate);
    write_method("two_systems", limit.aggregate);
    if (extensive_ok) write_method("extensive", ext.aggregate);
  }

  std::printf("compare: two-systems mean discrepancy %.6f over %d trials", mean_two,
              config.trials);
  if (config.extensive.enabled && !extensive_ok)
    std::printf(" (extensive skipped: %s)", extensive_reason.c_str());
  std::printf(" -> compare_summary.csv\n");
}

void cmd_train(const ExperimentConfig& config) {
  TrainConfig tc = config.train.config;
  tc.step = config_step_options(config);

  Trainer trainer = [&]() {
    if (!config.train.resume.empty()) {
      Trainer resumed = load_trainer(config.train.resume);
      check_checkpoint_dims(resumed, config);
      tc.hidden = resumed.config.hidden;
      tc.time_feature = resumed.policy.time_feature;
      resumed.config = tc;
      return resumed;
    }
    return make_trainer(config.problem, config.k_star, tc, config.seed);
  }();

  std::vector<CurvePoint> curve;
  if (config.train.mode == "limiting") {
    DegreeDistribution dist = limiting_distribution(config);
    curve = train_limiting(trainer, config.problem, dist);
  } else {
    Graph g = config_graph(config);
    ClassPartition partition = partition_classes(g, config.k_star);
    curve = train_on_graph(trainer, config.problem, g, partition);
  }

  write_curve_csv(curve, output_path(config, "curve.csv"), config_comment(config));
  save_trainer(trainer, output_path(config, "trainer.txt"));
  if (curve.empty())
    std::printf("train: 0 iterations -> curve.csv, trainer.txt\n");
  else
    std::printf("train: %zu iterations, final mean return %.6f -> curve.csv, trainer.txt\n",
                curve.size(), curve.back().mean_return);
}

void cmd_evaluate(const ExperimentConfig& config) {
  if (config.policy.source != "checkpoint")
    throw ConfigError("evaluate requires policy.source = checkpoint");
  Trainer trainer = load_trainer(config.policy.path);
  check_checkpoint_dims(trainer, config);

  const bool want_limiting =
      config.evaluate.target == "limiting" || config.evaluate.target == "both";
  const bool want_graph = config.evaluate.target == "graph" || config.evaluate.target == "both";
  StepOptions step = config_step_options(config);
  auto uniform = PolicyEnsemble::uniform(config.k_star, config.problem.n_states(),
                                         config.problem.n_actions());
  std::vector<PolicyEnsemble> uniform_policies = {uniform};

  Csv table(output_path(config, "evaluation.csv"), config_comment(config),
            "policy,target,objective,std,trials");
  double trained_limit = 0.0;
  if (want_limiting) {
    DegreeDistribution dist = limiting_distribution(config);
    auto trained = evaluate_limiting(trainer.policy, config.problem, dist, step);
    trained_limit = trained.objective;
    auto base = mean_field_rollout(config.problem, dist, config.k_star, uniform_policies, step);
    table.field("trained").field("limiting").field(trained.objective).field(0.0).field(1);
    table.end_row();
    table.field("uniform").field("limiting").field(base.objective).field(0.0).field(1);
    table.end_row();
  }
  if (want_graph) {
    Graph g = config_graph(config);
    ClassPartition partition = partition_classes(g, config.k_star);
    auto trained = evaluate_on_graph(trainer.policy, config.problem, g, partition, config.trials,
                                     hash_mix(config.seed, 2001));
    auto base = estimate_objective(config.problem, g, partition, uniform_policies, config.trials,
                                   hash_mix(config.seed, 2002));
    table.field("trained")
        .field("graph")
        .field(trained.mean)
        .field(trained.std_error)
        .field(config.trials);
    table.end_row();
    table.field("uniform")
        .field("graph")
        .field(base.mean)
        .field(base.std_error)
        .field(config.trials);
    table.end_row();
  }
  if (want_limiting)
    std::printf("evaluate: trained limiting objective %.6f -> evaluation.csv\n", trained_limit);
  else
    std::printf("evaluate: wrote evaluation.csv\n");
}

}  // namespace mfcnet
