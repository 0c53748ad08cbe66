#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ovd/agent.hpp"
#include "ovd/env.hpp"

namespace ovd {

enum class Algorithm { kOvdeG, kOvdeQ, kOvdeM, kDsac, kSacScalar };

std::string algorithm_name(Algorithm algo);
Algorithm parse_algorithm(const std::string& name);

struct EnvConfig {
  std::string type = "gridchaos";
  GridChaosConfig gridchaos;
  double observation_noise_std = 0.0;  // extra Gaussian noise wrapper; 0 disables
};

/// Full experiment description. Hyperparameter defaults: discount 0.99,
/// target smoothing 5e-3, learning rate 3e-4, batch 256, 20 quantiles,
/// buffer 1e5, alpha 0.05, beta 3.2, C 0.5.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kOvdeG;
  std::vector<int> seeds{1, 2, 3};
  int epochs = 1250;
  int steps_per_epoch = 100;
  int eval_episodes = 10;
  EnvConfig env;

  // train block
  double gamma = 0.99;
  double target_smoothing = 5e-3;
  double learning_rate = 3e-4;
  int batch_size = 256;
  int n_quantiles = 20;
  std::size_t buffer_capacity = 100000;
  double entropy_coeff = 0.2;
  int warmup_steps = 1000;
  int hidden_units = 64;
  int hidden_layers = 2;

  // explore block
  double explore_alpha = 0.05;
  double explore_beta = 3.2;
  double c_norm = 0.5;
  int k_samples = 4;

  // output block
  int heatmap_bins = 50;
  int max_parallel_seeds = 0;  // 0 = hardware concurrency

  void validate() const;  // throws std::invalid_argument naming the field
};

std::string serialize_config(const ExperimentConfig& config);              // JSON text
ExperimentConfig parse_config(const std::string& json_text);               // strict keys
ExperimentConfig load_config_file(const std::string& path);
void write_config_file(const ExperimentConfig& config, const std::string& path);

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b);

/// Maps the selected algorithm onto agent settings: dsac zeroes the step
/// size, sac_scalar additionally collapses to a single quantile, ovde_q uses
/// the quantile-form current distribution, ovde_m disables the pessimistic
/// mean shift.
AgentConfig make_agent_config(const ExperimentConfig& config);

std::unique_ptr<Env> make_env(const ExperimentConfig& config, std::uint64_t seed, StreamId stream);

}  // namespace ovd
