#include "mfcnet/config.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mfcnet/graph.hpp"
#include "mfcnet/rng.hpp"

namespace mfcnet {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(section + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) fail("unknown key '" + item.key() + "' in " + section);
  }
}

double get_double(const json& obj, const std::string& section, const char* key, double dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(section + "." + key + " must be a number");
  return v.get<double>();
}

int64_t get_int(const json& obj, const std::string& section, const char* key, int64_t dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(section + "." + key + " must be an integer");
  return v.get<int64_t>();
}

bool get_bool(const json& obj, const std::string& section, const char* key, bool dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(section + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& section, const char* key,
                       const std::string& dflt) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(section + "." + key + " must be a string");
  return v.get<std::string>();
}

double get_unit(const json& obj, const std::string& section, const char* key, double dflt) {
  double v = get_double(obj, section, key, dflt);
  if (v < 0.0 || v > 1.0) fail(section + "." + key + " must lie in [0, 1]");
  return v;
}

double get_nonneg(const json& obj, const std::string& section, const char* key, double dflt) {
  double v = get_double(obj, section, key, dflt);
  if (v < 0.0) fail(section + "." + key + " must be nonnegative");
  return v;
}

int get_horizon(const json& obj, const std::string& section, int dflt) {
  int64_t v = get_int(obj, section, "horizon", dflt);
  if (v < 1 || v > 100000) fail(section + ".horizon must lie in [1, 100000]");
  return static_cast<int>(v);
}

void require_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::exists(path)) fail(what + " does not exist: " + path);
}

ProblemSpec build_problem(const std::string& name, const json& params) {
  if (name == "sis") {
    check_keys(params, "problem.params",
               {"rho_infect", "rho_recover", "cost_protect", "cost_infected", "mu0_infected",
                "horizon"});
    SisParams p;
    p.rho_infect = get_unit(params, "problem.params", "rho_infect", p.rho_infect);
    p.rho_recover = get_unit(params, "problem.params", "rho_recover", p.rho_recover);
    p.cost_protect = get_nonneg(params, "problem.params", "cost_protect", p.cost_protect);
    p.cost_infected = get_nonneg(params, "problem.params", "cost_infected", p.cost_infected);
    p.mu0_infected = get_unit(params, "problem.params", "mu0_infected", p.mu0_infected);
    p.horizon = get_horizon(params, "problem.params", p.horizon);
    return sis_problem(p);
  }
  if (name == "sir") {
    check_keys(params, "problem.params",
               {"rho_infect", "rho_recover", "cost_protect", "cost_infected", "mu0_infected",
                "horizon"});
    SirParams p;
    p.rho_infect = get_unit(params, "problem.params", "rho_infect", p.rho_infect);
    p.rho_recover = get_unit(params, "problem.params", "rho_recover", p.rho_recover);
    p.cost_protect = get_nonneg(params, "problem.params", "cost_protect", p.cost_protect);
    p.cost_infected = get_nonneg(params, "problem.params", "cost_infected", p.cost_infected);
    p.mu0_infected = get_unit(params, "problem.params", "mu0_infected", p.mu0_infected);
    p.horizon = get_horizon(params, "problem.params", p.horizon);
    return sir_problem(p);
  }
  if (name == "color") {
    check_keys(params, "problem.params",
               {"rho_disturb", "cost_move", "cost_disagree", "cost_mismatch", "target",
                "horizon"});
    ColorParams p;
    p.rho_disturb = get_unit(params, "problem.params", "rho_disturb", p.rho_disturb);
    p.cost_move = get_nonneg(params, "problem.params", "cost_move", p.cost_move);
    p.cost_disagree = get_nonneg(params, "problem.params", "cost_disagree", p.cost_disagree);
    p.cost_mismatch = get_nonneg(params, "problem.params", "cost_mismatch", p.cost_mismatch);
    if (params.contains("target")) {
      const json& t = params.at("target");
      if (!t.is_array() || t.size() < 2) fail("problem.params.target must list 2+ masses");
      p.target.clear();
      double sum = 0.0;
      for (const json& v : t) {
        if (!v.is_number()) fail("problem.params.target entries must be numbers");
        double m = v.get<double>();
        if (m < 0.0) fail("problem.params.target entries must be nonnegative");
        p.target.push_back(m);
        sum += m;
      }
      if (std::abs(sum - 1.0) > 1e-6) fail("problem.params.target must sum to 1");
    }
    p.horizon = get_horizon(params, "problem.params", p.horizon);
    return color_problem(p);
  }
  if (name == "rumor") {
    check_keys(params, "problem.params",
               {"rho_aware", "cost_spread", "reward_spread", "mu0_aware", "horizon"});
    RumorParams p;
    p.rho_aware = get_unit(params, "problem.params", "rho_aware", p.rho_aware);
    p.cost_spread = get_nonneg(params, "problem.params", "cost_spread", p.cost_spread);
    p.reward_spread = get_nonneg(params, "problem.params", "reward_spread", p.reward_spread);
    p.mu0_aware = get_unit(params, "problem.params", "mu0_aware", p.mu0_aware);
    p.horizon = get_horizon(params, "problem.params", p.horizon);
    return rumor_problem(p);
  }
  fail("problem.name must be one of sis, sir, color, rumor (got '" + name + "')");
}

GraphSection parse_graph(const json& g) {
  check_keys(g, "graph", {"source", "n", "seed", "gamma", "pmf", "path"});
  GraphSection s;
  s.source = get_string(g, "graph", "source", s.source);
  if (s.source != "sample" && s.source != "file") fail("graph.source must be sample or file");
  int64_t n = get_int(g, "graph", "n", s.n);
  if (n < 1 || n > 10'000'000) fail("graph.n must lie in [1, 10000000]");
  s.n = static_cast<int>(n);
  int64_t seed = get_int(g, "graph", "seed", static_cast<int64_t>(s.seed));
  if (seed < 0) fail("graph.seed must be nonnegative");
  s.seed = static_cast<uint64_t>(seed);
  s.gamma = get_double(g, "graph", "gamma", s.gamma);
  if (s.gamma <= 2.0 || s.gamma > 10.0) fail("graph.gamma must lie in (2, 10]");
  if (g.contains("pmf")) {
    const json& pm = g.at("pmf");
    if (!pm.is_object() || pm.empty()) fail("graph.pmf must map degrees to masses");
    double sum = 0.0;
    for (const auto& item : pm.items()) {
      int degree = 0;
      try {
        size_t used = 0;
        degree = std::stoi(item.key(), &used);
        if (used != item.key().size()) throw std::invalid_argument(item.key());
      } catch (const std::exception&) {
        fail("graph.pmf keys must be integer degrees (got '" + item.key() + "')");
      }
      if (degree < 0 || degree > 1'000'000) fail("graph.pmf degrees must lie in [0, 1000000]");
      if (!item.value().is_number()) fail("graph.pmf masses must be numbers");
      double mass = item.value().get<double>();
      if (mass < 0.0) fail("graph.pmf masses must be nonnegative");
      s.pmf[degree] = mass;
      sum += mass;
    }
    if (std::abs(sum - 1.0) > 1e-6) fail("graph.pmf masses must sum to 1");
  }
  s.path = get_string(g, "graph", "path", "");
  if (s.source == "file") {
    if (s.path.empty()) fail("graph.path is required when graph.source is file");
    require_file(s.path, "graph.path");
  }
  return s;
}

TrainSection parse_train(const json& t) {
  check_keys(t, "train",
             {"mode", "resume", "iterations", "discount", "gae_lambda", "train_batch",
              "minibatch", "epochs_per_batch", "clip", "kl_coeff", "kl_target",
              "learning_rate", "vf_coeff", "episode_length", "hidden", "time_feature"});
  TrainSection s;
  s.mode = get_string(t, "train", "mode", s.mode);
  if (s.mode != "limiting" && s.mode != "graph") fail("train.mode must be limiting or graph");
  s.resume = get_string(t, "train", "resume", "");
  if (!s.resume.empty()) require_file(s.resume, "train.resume");
  TrainConfig& c = s.config;
  int64_t iters = get_int(t, "train", "iterations", c.iterations);
  if (iters < 0 || iters > 1'000'000) fail("train.iterations must lie in [0, 1000000]");
  c.iterations = static_cast<int>(iters);
  c.discount = get_double(t, "train", "discount", c.discount);
  if (c.discount <= 0.0 || c.discount > 1.0) fail("train.discount must lie in (0, 1]");
  c.gae_lambda = get_unit(t, "train", "gae_lambda", c.gae_lambda);
  c.train_batch = static_cast<int>(get_int(t, "train", "train_batch", c.train_batch));
  if (c.train_batch < 1) fail("train.train_batch must be positive");
  c.minibatch = static_cast<int>(get_int(t, "train", "minibatch", c.minibatch));
  if (c.minibatch < 1 || c.minibatch > c.train_batch)
    fail("train.minibatch must lie in [1, train_batch]");
  c.epochs_per_batch =
      static_cast<int>(get_int(t, "train", "epochs_per_batch", c.epochs_per_batch));
  if (c.epochs_per_batch < 1) fail("train.epochs_per_batch must be positive");
  c.clip = get_double(t, "train", "clip", c.clip);
  if (c.clip <= 0.0 || c.clip >= 1.0) fail("train.clip must lie in (0, 1)");
  c.kl_coeff = get_nonneg(t, "train", "kl_coeff", c.kl_coeff);
  c.kl_target = get_double(t, "train", "kl_target", c.kl_target);
  if (c.kl_target <= 0.0) fail("train.kl_target must be positive");
  c.learning_rate = get_nonneg(t, "train", "learning_rate", c.learning_rate);
  c.vf_coeff = get_nonneg(t, "train", "vf_coeff", c.vf_coeff);
  int64_t blen = get_int(t, "train", "episode_length", c.episode_length);
  if (blen < 0 || blen > 100000) fail("train.episode_length must lie in [0, 100000]");
  c.episode_length = static_cast<int>(blen);
  int64_t hidden = get_int(t, "train", "hidden", c.hidden);
  if (hidden < 1 || hidden > 4096) fail("train.hidden must lie in [1, 4096]");
  c.hidden = static_cast<int>(hidden);
  c.time_feature = get_bool(t, "train", "time_feature", c.time_feature);
  return s;
}

void apply_override(json& root, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    fail("--set expects key=value (got '" + assignment + "')");
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  json* node = &root;
  size_t pos = 0;
  while (true) {
    size_t dot = path.find('.', pos);
    std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (key.empty()) fail("--set path has an empty component: '" + path + "'");
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    json& next = (*node)[key];
    if (!next.is_object()) fail("--set path crosses a non-object at '" + key + "'");
    node = &next;
    pos = dot + 1;
  }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("config root must be a JSON object");
  for (const std::string& o : overrides) apply_override(root, o);

  check_keys(root, "config",
             {"seed", "trials", "k_star", "mode", "samples", "output_dir", "graph", "problem",
              "policy", "extensive", "train", "evaluate"});

  ExperimentConfig cfg;
  int64_t seed = get_int(root, "config", "seed", static_cast<int64_t>(cfg.seed));
  if (seed < 0) fail("seed must be nonnegative");
  cfg.seed = static_cast<uint64_t>(seed);
  int64_t trials = get_int(root, "config", "trials", cfg.trials);
  if (trials < 1 || trials > 100000) fail("trials must lie in [1, 100000]");
  cfg.trials = static_cast<int>(trials);
  int64_t k_star = get_int(root, "config", "k_star", cfg.k_star);
  if (k_star < 1 || k_star > 64) fail("k_star must lie in [1, 64]");
  cfg.k_star = static_cast<int>(k_star);
  cfg.mode = get_string(root, "config", "mode", cfg.mode);
  if (cfg.mode != "exact" && cfg.mode != "sampled") fail("mode must be exact or sampled");
  int64_t samples = get_int(root, "config", "samples", cfg.samples);
  if (samples < 1 || samples > 100'000'000) fail("samples must lie in [1, 100000000]");
  cfg.samples = static_cast<int>(samples);
  cfg.output_dir = get_string(root, "config", "output_dir", "");

  if (root.contains("graph")) cfg.graph = parse_graph(root.at("graph"));

  json params = json::object();
  if (root.contains("problem")) {
    const json& p = root.at("problem");
    check_keys(p, "problem", {"name", "params"});
    cfg.problem_name = get_string(p, "problem", "name", cfg.problem_name);
    if (p.contains("params")) params = p.at("params");
  }
  cfg.problem = build_problem(cfg.problem_name, params);

  if (root.contains("policy")) {
    const json& p = root.at("policy");
    check_keys(p, "policy", {"source", "path"});
    cfg.policy.source = get_string(p, "policy", "source", cfg.policy.source);
    if (cfg.policy.source != "uniform" && cfg.policy.source != "checkpoint")
      fail("policy.source must be uniform or checkpoint");
    cfg.policy.path = get_string(p, "policy", "path", "");
    if (cfg.policy.source == "checkpoint") {
      if (cfg.policy.path.empty()) fail("policy.path is required for policy.source=checkpoint");
      require_file(cfg.policy.path, "policy.path");
    }
  }

  if (root.contains("extensive")) {
    const json& e = root.at("extensive");
    check_keys(e, "extensive", {"enabled", "tensor_budget", "tail_degree"});
    cfg.extensive.enabled = get_bool(e, "extensive", "enabled", cfg.extensive.enabled);
    cfg.extensive.tensor_budget =
        get_int(e, "extensive", "tensor_budget", cfg.extensive.tensor_budget);
    if (cfg.extensive.tensor_budget < 1) fail("extensive.tensor_budget must be positive");
    int64_t td = get_int(e, "extensive", "tail_degree", cfg.extensive.tail_degree);
    if (td < 0 || td > 1000) fail("extensive.tail_degree must lie in [0, 1000]");
    cfg.extensive.tail_degree = static_cast<int>(td);
  }

  if (root.contains("train")) cfg.train = parse_train(root.at("train"));

  if (root.contains("evaluate")) {
    const json& e = root.at("evaluate");
    check_keys(e, "evaluate", {"target"});
    cfg.evaluate.target = get_string(e, "evaluate", "target", cfg.evaluate.target);
    if (cfg.evaluate.target != "limiting" && cfg.evaluate.target != "graph" &&
        cfg.evaluate.target != "both")
      fail("evaluate.target must be limiting, graph or both");
  }

  cfg.canonical = root.dump();
  cfg.hash = fnv1a(cfg.canonical);
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str(), overrides);
  } catch (const ConfigError& e) {
    fail(path + ": " + e.what());
  }
}

std::string config_comment(const ExperimentConfig& config) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "config %016llx",
                static_cast<unsigned long long>(config.hash));
  return buf;
}

std::string resolve_output_dir(const ExperimentConfig& config) {
  std::string dir = config.output_dir;
  if (dir.empty()) {
    const char* env = std::getenv("MFCNET_OUTPUT_DIR");
    if (env != nullptr && env[0] != '\0') dir = env;
  }
  if (dir.empty()) dir = ".";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string output_path(const ExperimentConfig& config, const std::string& name) {
  return resolve_output_dir(config) + "/" + name;
}

DegreeDistribution config_distribution(const ExperimentConfig& config) {
  if (!config.graph.pmf.empty()) return DegreeDistribution::explicit_pmf(config.graph.pmf);
  return DegreeDistribution::power_law(config.graph.gamma);
}

Graph config_graph(const ExperimentConfig& config) {
  if (config.graph.source == "file") return load_edge_list(config.graph.path);
  DegreeDistribution law = config_distribution(config);
  Rng rng = Rng::stream(config.graph.seed, 0, 0);
  std::vector<double> weights(config.graph.n);
  for (double& w : weights) w = static_cast<double>(law.sample(rng));
  return sample_chung_lu(weights, hash_mix(config.graph.seed, 1));
}

StepOptions config_step_options(const ExperimentConfig& config) {
  StepOptions opts;
  opts.sampled = config.mode == "sampled";
  opts.n_samples = config.samples;
  opts.seed = hash_mix(config.seed, 0x5eed);
  opts.tail_degree_override = config.extensive.tail_degree;
  return opts;
}

}  // namespace mfcnet
