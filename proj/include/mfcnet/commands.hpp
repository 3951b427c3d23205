#pragma once

#include "mfcnet/config.hpp"

namespace mfcnet {

// Experiment commands behind the CLI. Each writes its artifacts into the
// resolved output directory and prints a one-line summary; configuration
// problems raise ConfigError, computational failures raise the module
// exceptions, and the CLI maps these to exit codes 1 and 2.

// Edge list plus degree histogram for the configured sampled graph.
void cmd_sample_graph(const ExperimentConfig& config);

// Two-systems rollout artifacts: per-class trajectory CSV and a summary row.
void cmd_mf_rollout(const ExperimentConfig& config);

// Joint-law rollout artifacts, same layout; feasibility gates propagate.
void cmd_extensive_rollout(const ExperimentConfig& config);

// Finite simulations against the limiting rollouts on one graph: discrepancy
// summary, per-trial rows and per-time trajectories. The extensive method is
// included when enabled and reported as skipped when its gates reject it.
void cmd_compare(const ExperimentConfig& config);

// Policy-gradient training in the configured mode; writes the learning curve
// and a resumable checkpoint.
void cmd_train(const ExperimentConfig& config);

// Checkpoint-vs-uniform objective table on the configured targets.
void cmd_evaluate(const ExperimentConfig& config);

}  // namespace mfcnet
