#include "ovd/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ovd {

using nlohmann::json;

std::string algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kOvdeG: return "ovde_g";
    case Algorithm::kOvdeQ: return "ovde_q";
    case Algorithm::kOvdeM: return "ovde_m";
    case Algorithm::kDsac: return "dsac";
    case Algorithm::kSacScalar: return "sac_scalar";
  }
  throw std::invalid_argument("algorithm: unknown enum value");
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "ovde_g") return Algorithm::kOvdeG;
  if (name == "ovde_q") return Algorithm::kOvdeQ;
  if (name == "ovde_m") return Algorithm::kOvdeM;
  if (name == "dsac") return Algorithm::kDsac;
  if (name == "sac_scalar") return Algorithm::kSacScalar;
  throw std::invalid_argument("algo: unknown algorithm '" + name + "'");
}

namespace {

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& known) {
  for (const auto& item : obj.items())
    if (!known.count(item.key()))
      throw std::invalid_argument("config: unknown field '" + prefix + item.key() + "'");
}

template <typename T>
void read(const json& obj, const std::string& prefix, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config: bad value for field '" + prefix + key + "'");
  }
}

void read_vec2(const json& obj, const std::string& prefix, const char* key, Eigen::Vector2d& out) {
  if (!obj.contains(key)) return;
  const json& arr = obj.at(key);
  if (!arr.is_array() || arr.size() != 2)
    throw std::invalid_argument("config: field '" + prefix + key + "' must be a 2-array");
  out.x() = arr[0].get<double>();
  out.y() = arr[1].get<double>();
}

json vec2_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

}  // namespace

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw std::invalid_argument("seeds: at least one seed required");
  if (epochs < 0) throw std::invalid_argument("epochs: must be non-negative");
  if (steps_per_epoch < 1) throw std::invalid_argument("steps_per_epoch: must be positive");
  if (eval_episodes < 1) throw std::invalid_argument("eval_episodes: must be positive");
  if (env.type != "gridchaos") throw std::invalid_argument("env.type: unknown type '" + env.type + "'");
  if (env.observation_noise_std < 0.0)
    throw std::invalid_argument("env.observation_noise_std: must be non-negative");
  env.gridchaos.validate();
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("train.gamma: must be in [0, 1]");
  if (target_smoothing < 0.0 || target_smoothing > 1.0)
    throw std::invalid_argument("train.target_smoothing: must be in [0, 1]");
  if (learning_rate <= 0.0) throw std::invalid_argument("train.learning_rate: must be positive");
  if (batch_size < 1) throw std::invalid_argument("train.batch_size: must be positive");
  if (n_quantiles < 1) throw std::invalid_argument("train.n_quantiles: must be positive");
  if (buffer_capacity < 1) throw std::invalid_argument("train.buffer_capacity: must be positive");
  if (entropy_coeff < 0.0) throw std::invalid_argument("train.entropy_coeff: must be non-negative");
  if (warmup_steps < 0) throw std::invalid_argument("train.warmup_steps: must be non-negative");
  if (hidden_units < 1) throw std::invalid_argument("train.hidden_units: must be positive");
  if (hidden_layers < 1) throw std::invalid_argument("train.hidden_layers: must be positive");
  if (explore_alpha < 0.0) throw std::invalid_argument("explore.alpha: must be non-negative");
  if (explore_beta < 0.0) throw std::invalid_argument("explore.beta: must be non-negative");
  if (c_norm <= 0.0) throw std::invalid_argument("explore.c_norm: must be positive");
  if (k_samples < 0) throw std::invalid_argument("explore.k_samples: must be non-negative");
  if (heatmap_bins < 1) throw std::invalid_argument("output.heatmap_bins: must be positive");
  if (max_parallel_seeds < 0)
    throw std::invalid_argument("output.max_parallel_seeds: must be non-negative");
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["algo"] = algorithm_name(c.algorithm);
  j["seeds"] = c.seeds;
  j["epochs"] = c.epochs;
  j["steps_per_epoch"] = c.steps_per_epoch;
  j["eval_episodes"] = c.eval_episodes;
  j["env"] = {
      {"type", c.env.type},
      {"quadrant_noise", c.env.gridchaos.quadrant_noise},
      {"start", vec2_json(c.env.gridchaos.start)},
      {"goal", vec2_json(c.env.gridchaos.goal)},
      {"goal_radius", c.env.gridchaos.goal_radius},
      {"max_step_distance", c.env.gridchaos.max_step_distance},
      {"max_steps", c.env.gridchaos.max_steps},
      {"bounds_lo", vec2_json(c.env.gridchaos.bounds.lo)},
      {"bounds_hi", vec2_json(c.env.gridchaos.bounds.hi)},
      {"observation_noise_std", c.env.observation_noise_std},
  };
  j["train"] = {
      {"gamma", c.gamma},
      {"target_smoothing", c.target_smoothing},
      {"learning_rate", c.learning_rate},
      {"batch_size", c.batch_size},
      {"n_quantiles", c.n_quantiles},
      {"buffer_capacity", c.buffer_capacity},
      {"entropy_coeff", c.entropy_coeff},
      {"warmup_steps", c.warmup_steps},
      {"hidden_units", c.hidden_units},
      {"hidden_layers", c.hidden_layers},
  };
  j["explore"] = {
      {"alpha", c.explore_alpha},
      {"beta", c.explore_beta},
      {"c_norm", c.c_norm},
      {"k_samples", c.k_samples},
  };
  j["output"] = {
      {"heatmap_bins", c.heatmap_bins},
      {"max_parallel_seeds", c.max_parallel_seeds},
  };
  return j.dump(2) + "\n";
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  check_keys(j, "", {"algo", "seeds", "epochs", "steps_per_epoch", "eval_episodes", "env",
                     "train", "explore", "output"});
  if (j.contains("algo")) c.algorithm = parse_algorithm(j.at("algo").get<std::string>());
  read(j, "", "seeds", c.seeds);
  read(j, "", "epochs", c.epochs);
  read(j, "", "steps_per_epoch", c.steps_per_epoch);
  read(j, "", "eval_episodes", c.eval_episodes);

  if (j.contains("env")) {
    const json& e = j.at("env");
    check_keys(e, "env.", {"type", "quadrant_noise", "start", "goal", "goal_radius",
                           "max_step_distance", "max_steps", "bounds_lo", "bounds_hi",
                           "observation_noise_std"});
    read(e, "env.", "type", c.env.type);
    read(e, "env.", "quadrant_noise", c.env.gridchaos.quadrant_noise);
    read_vec2(e, "env.", "start", c.env.gridchaos.start);
    read_vec2(e, "env.", "goal", c.env.gridchaos.goal);
    read(e, "env.", "goal_radius", c.env.gridchaos.goal_radius);
    read(e, "env.", "max_step_distance", c.env.gridchaos.max_step_distance);
    read(e, "env.", "max_steps", c.env.gridchaos.max_steps);
    read_vec2(e, "env.", "bounds_lo", c.env.gridchaos.bounds.lo);
    read_vec2(e, "env.", "bounds_hi", c.env.gridchaos.bounds.hi);
    read(e, "env.", "observation_noise_std", c.env.observation_noise_std);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    check_keys(t, "train.", {"gamma", "target_smoothing", "learning_rate", "batch_size",
                             "n_quantiles", "buffer_capacity", "entropy_coeff", "warmup_steps",
                             "hidden_units", "hidden_layers"});
    read(t, "train.", "gamma", c.gamma);
    read(t, "train.", "target_smoothing", c.target_smoothing);
    read(t, "train.", "learning_rate", c.learning_rate);
    read(t, "train.", "batch_size", c.batch_size);
    read(t, "train.", "n_quantiles", c.n_quantiles);
    read(t, "train.", "buffer_capacity", c.buffer_capacity);
    read(t, "train.", "entropy_coeff", c.entropy_coeff);
    read(t, "train.", "warmup_steps", c.warmup_steps);
    read(t, "train.", "hidden_units", c.hidden_units);
    read(t, "train.", "hidden_layers", c.hidden_layers);
  }
  if (j.contains("explore")) {
    const json& x = j.at("explore");
    check_keys(x, "explore.", {"alpha", "beta", "c_norm", "k_samples"});
    read(x, "explore.", "alpha", c.explore_alpha);
    read(x, "explore.", "beta", c.explore_beta);
    read(x, "explore.", "c_norm", c.c_norm);
    read(x, "explore.", "k_samples", c.k_samples);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output.", {"heatmap_bins", "max_parallel_seeds"});
    read(o, "output.", "heatmap_bins", c.heatmap_bins);
    read(o, "output.", "max_parallel_seeds", c.max_parallel_seeds);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void write_config_file(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out << serialize_config(config);
}

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

AgentConfig make_agent_config(const ExperimentConfig& c) {
  AgentConfig agent;
  agent.state_dim = 2;
  agent.action_dim = 2;
  agent.n_quantiles = c.algorithm == Algorithm::kSacScalar ? 1 : c.n_quantiles;
  agent.hidden.assign(static_cast<std::size_t>(c.hidden_layers), c.hidden_units);
  agent.gamma = c.gamma;
  agent.target_smoothing = c.target_smoothing;
  agent.learning_rate = c.learning_rate;
  agent.batch_size = c.batch_size;
  agent.buffer_capacity = c.buffer_capacity;
  agent.entropy_coeff = c.entropy_coeff;
  agent.warmup_steps = c.warmup_steps;
  agent.explore.alpha = c.explore_alpha;
  agent.explore.beta = c.explore_beta;
  agent.explore.c_norm = c.c_norm;
  agent.explore.k_samples = c.k_samples;
  agent.explore.z_mode = c.algorithm == Algorithm::kOvdeQ ? ZMode::kQuantile : ZMode::kGaussian;
  agent.explore.pessimistic_mean = c.algorithm != Algorithm::kOvdeM;
  if (c.algorithm == Algorithm::kDsac || c.algorithm == Algorithm::kSacScalar)
    agent.explore.alpha = 0.0;
  return agent;
}

std::unique_ptr<Env> make_env(const ExperimentConfig& config, std::uint64_t seed,
                              StreamId stream) {
  auto env = std::make_unique<GridChaosEnv>(config.env.gridchaos,
                                            splitmix64(splitmix64(seed) +
                                                       static_cast<std::uint64_t>(stream)));
  if (config.env.observation_noise_std > 0.0)
    return std::make_unique<GaussianNoiseWrapper>(
        std::move(env), config.env.observation_noise_std,
        splitmix64(splitmix64(seed ^ 0x5eedULL) + static_cast<std::uint64_t>(stream)));
  return env;
}

}  // namespace ovd
