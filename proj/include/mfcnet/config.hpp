#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfcnet/degree.hpp"
#include "mfcnet/learn.hpp"
#include "mfcnet/problems.hpp"

namespace mfcnet {

// Raised for malformed configs, out-of-range parameters, unknown keys and
// missing referenced files. The CLI maps it to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphSection {
  std::string source = "sample";  // sample | file
  int n = 1000;
  uint64_t seed = 1;
  double gamma = 2.5;             // power-law exponent, used when pmf is empty
  std::map<int, double> pmf;      // explicit degree law (degree -> mass)
  std::string path;               // edge-list path for source = file
};

struct PolicySection {
  std::string source = "uniform";  // uniform | checkpoint
  std::string path;                // trainer checkpoint for source = checkpoint
};

struct ExtensiveSection {
  bool enabled = false;
  int64_t tensor_budget = 10'000'000;
  int tail_degree = 0;  // > 0 overrides the pooled-class effective degree
};

struct TrainSection {
  std::string mode = "limiting";  // limiting | graph
  std::string resume;             // checkpoint to continue from
  TrainConfig config;
};

struct EvaluateSection {
  std::string target = "limiting";  // limiting | graph | both
};

// One experiment run. Parsed from a JSON file with strict key checking;
// dotted --set overrides are applied to the JSON tree before validation.
struct ExperimentConfig {
  uint64_t seed = 1;
  int trials = 20;
  int k_star = 5;
  std::string mode = "exact";  // exact | sampled neighborhood expectations
  int samples = 10000;         // Monte Carlo draws per step in sampled mode
  std::string output_dir;      // empty: $MFCNET_OUTPUT_DIR, then "."

  GraphSection graph;
  std::string problem_name = "sis";
  ProblemSpec problem;  // built from the name plus parameter overrides

  PolicySection policy;
  ExtensiveSection extensive;
  TrainSection train;
  EvaluateSection evaluate;

  std::string canonical;  // normalized JSON after overrides
  uint64_t hash = 0;      // FNV-1a of canonical
};

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// "config <16 hex digits>": the comment line stamped on every CSV artifact.
std::string config_comment(const ExperimentConfig& config);

// Output directory after env fallback, created if needed; joins file names.
std::string resolve_output_dir(const ExperimentConfig& config);
std::string output_path(const ExperimentConfig& config, const std::string& name);

// Degree law named by the config: the explicit pmf when given, else the
// power law. Commands that operate on a concrete graph use its empirical
// degree law instead so that finite and limiting sides describe one object.
DegreeDistribution config_distribution(const ExperimentConfig& config);

// Graph named by the config: Chung-Lu sample with weights drawn from the
// configured law, or a loaded edge list.
Graph config_graph(const ExperimentConfig& config);

StepOptions config_step_options(const ExperimentConfig& config);

}  // namespace mfcnet
