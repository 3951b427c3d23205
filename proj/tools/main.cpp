#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "mfcnet/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mean-field control toolkit for sparse interaction graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
  auto add_command = [&](const char* name, const char* description) {
    CLI::App* cmd = app.add_subcommand(name, description);
    cmd->add_option("-c,--config", config_path, "JSON experiment config")->required();
    cmd->add_option("--set", overrides, "dotted key=value config override, repeatable");
    cmd->add_option("-o,--output-dir", output_dir,
                    "output directory (overrides config and MFCNET_OUTPUT_DIR)");
    return cmd;
  };

  CLI::App* sample_graph =
      add_command("sample-graph", "sample the configured graph; write edge list and histogram");
  CLI::App* mf_rollout =
      add_command("mf-rollout", "two-systems rollout; write trajectory and summary");
  CLI::App* extensive_rollout =
      add_command("extensive-rollout", "joint-law rollout; write trajectory and summary");
  CLI::App* compare =
      add_command("compare", "finite simulations vs limiting rollouts on one graph");
  CLI::App* train = add_command("train", "policy-gradient training; write curve and checkpoint");
  CLI::App* evaluate = add_command("evaluate", "checkpoint-vs-uniform objective table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    mfcnet::ExperimentConfig config = mfcnet::load_config(config_path, overrides);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (sample_graph->parsed()) mfcnet::cmd_sample_graph(config);
    if (mf_rollout->parsed()) mfcnet::cmd_mf_rollout(config);
    if (extensive_rollout->parsed()) mfcnet::cmd_extensive_rollout(config);
    if (compare->parsed()) mfcnet::cmd_compare(config);
    if (train->parsed()) mfcnet::cmd_train(config);
    if (evaluate->parsed()) mfcnet::cmd_evaluate(config);
    return 0;
  } catch (const mfcnet::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
