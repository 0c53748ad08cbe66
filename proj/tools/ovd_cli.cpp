#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ovd/experiment.hpp"

namespace {

std::vector<int> parse_seed_list(const std::string& text) {
  std::vector<int> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) seeds.push_back(std::stoi(item));
  }
  if (seeds.empty()) throw std::invalid_argument("seeds: empty seed list");
  return seeds;
}

struct Overrides {
  std::optional<std::string> algo;
  std::optional<std::string> seeds;
  std::optional<int> epochs, steps_per_epoch, eval_episodes;
  std::optional<std::vector<double>> quadrant_noise;
  std::optional<double> goal_radius, max_step_distance, observation_noise_std;
  std::optional<int> max_steps;
  std::optional<double> gamma, target_smoothing, learning_rate, entropy_coeff;
  std::optional<int> batch_size, n_quantiles, warmup_steps, hidden_units, hidden_layers;
  std::optional<std::size_t> buffer_capacity;
  std::optional<double> alpha, beta, c_norm;
  std::optional<int> k_samples, heatmap_bins, max_parallel_seeds;
};

void apply_overrides(ovd::ExperimentConfig& config, const Overrides& o) {
  if (o.algo) config.algorithm = ovd::parse_algorithm(*o.algo);
  if (o.seeds) config.seeds = parse_seed_list(*o.seeds);
  if (o.epochs) config.epochs = *o.epochs;
  if (o.steps_per_epoch) config.steps_per_epoch = *o.steps_per_epoch;
  if (o.eval_episodes) config.eval_episodes = *o.eval_episodes;
  if (o.quadrant_noise) {
    if (o.quadrant_noise->size() != 4)
      throw std::invalid_argument("env.quadrant_noise: expected 4 values");
    for (int q = 0; q < 4; ++q)
      config.env.gridchaos.quadrant_noise[static_cast<std::size_t>(q)] = (*o.quadrant_noise)[q];
  }
  if (o.goal_radius) config.env.gridchaos.goal_radius = *o.goal_radius;
  if (o.max_step_distance) config.env.gridchaos.max_step_distance = *o.max_step_distance;
  if (o.max_steps) config.env.gridchaos.max_steps = *o.max_steps;
  if (o.observation_noise_std) config.env.observation_noise_std = *o.observation_noise_std;
  if (o.gamma) config.gamma = *o.gamma;
  if (o.target_smoothing) config.target_smoothing = *o.target_smoothing;
  if (o.learning_rate) config.learning_rate = *o.learning_rate;
  if (o.entropy_coeff) config.entropy_coeff = *o.entropy_coeff;
  if (o.batch_size) config.batch_size = *o.batch_size;
  if (o.n_quantiles) config.n_quantiles = *o.n_quantiles;
  if (o.warmup_steps) config.warmup_steps = *o.warmup_steps;
  if (o.hidden_units) config.hidden_units = *o.hidden_units;
  if (o.hidden_layers) config.hidden_layers = *o.hidden_layers;
  if (o.buffer_capacity) config.buffer_capacity = *o.buffer_capacity;
  if (o.alpha) config.explore_alpha = *o.alpha;
  if (o.beta) config.explore_beta = *o.beta;
  if (o.c_norm) config.c_norm = *o.c_norm;
  if (o.k_samples) config.k_samples = *o.k_samples;
  if (o.heatmap_bins) config.heatmap_bins = *o.heatmap_bins;
  if (o.max_parallel_seeds) config.max_parallel_seeds = *o.max_parallel_seeds;
}

void print_summary(const ovd::Summary& summary) {
  std::cout << "algo " << summary.algorithm << ", " << summary.seeds.size() << " seed(s)\n";
  for (const auto& s : summary.seeds)
    std::cout << "  seed " << s.seed << ": final return " << s.final_return << ", FRG " << s.frg
              << "\n";
  std::cout << "final return mean " << summary.final_return_mean << ", std "
            << summary.final_return_std << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributional soft actor-critic with noise-aware optimistic exploration"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Run a multi-seed training experiment");
  std::string config_path, out_dir = "out";
  Overrides o;
  train->add_option("--config", config_path, "JSON config file (defaults used when omitted)");
  train->add_option("--out-dir", out_dir, "Output directory");
  train->add_option("--algo", o.algo, "ovde_g | ovde_q | ovde_m | dsac | sac_scalar");
  train->add_option("--seeds", o.seeds, "Comma-separated seed list, e.g. 1,2,3");
  train->add_option("--epochs", o.epochs);
  train->add_option("--steps-per-epoch", o.steps_per_epoch);
  train->add_option("--eval-episodes", o.eval_episodes);
  train->add_option("--env.quadrant-noise", o.quadrant_noise, "4 stds, quadrant order 1..4")
      ->expected(4);
  train->add_option("--env.goal-radius", o.goal_radius);
  train->add_option("--env.max-step-distance", o.max_step_distance);
  train->add_option("--env.max-steps", o.max_steps);
  train->add_option("--env.observation-noise-std", o.observation_noise_std);
  train->add_option("--train.gamma", o.gamma);
  train->add_option("--train.target-smoothing", o.target_smoothing);
  train->add_option("--train.learning-rate", o.learning_rate);
  train->add_option("--train.entropy-coeff", o.entropy_coeff);
  train->add_option("--train.batch-size", o.batch_size);
  train->add_option("--train.n-quantiles", o.n_quantiles);
  train->add_option("--train.buffer-capacity", o.buffer_capacity);
  train->add_option("--train.warmup-steps", o.warmup_steps);
  train->add_option("--train.hidden-units", o.hidden_units);
  train->add_option("--train.hidden-layers", o.hidden_layers);
  train->add_option("--explore.alpha", o.alpha);
  train->add_option("--explore.beta", o.beta);
  train->add_option("--explore.c-norm", o.c_norm);
  train->add_option("--explore.k-samples", o.k_samples);
  train->add_option("--output.heatmap-bins", o.heatmap_bins);
  train->add_option("--output.max-parallel-seeds", o.max_parallel_seeds);

  // summarize
  auto* summarize_cmd = app.add_subcommand("summarize", "Recompute the summary of a run directory");
  std::string in_dir;
  summarize_cmd->add_option("--in-dir", in_dir, "Run directory")->required();

  // heatmap
  auto* heatmap_cmd = app.add_subcommand("heatmap", "Export visitation heatmaps of a run directory");
  std::string heat_dir;
  heatmap_cmd->add_option("--in-dir", heat_dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      ovd::ExperimentConfig config;
      if (!config_path.empty()) config = ovd::load_config_file(config_path);
      apply_overrides(config, o);
      config.validate();
      const int rc = ovd::run_experiment(config, out_dir);
      if (rc == 0) print_summary(ovd::summarize_dir(out_dir, /*write_file=*/false));
      return rc;
    }
    if (summarize_cmd->parsed()) {
      print_summary(ovd::summarize_dir(in_dir));
      return 0;
    }
    if (heatmap_cmd->parsed()) {
      const int n = ovd::export_heatmaps_dir(heat_dir);
      std::cout << "exported " << n << " heatmap(s)\n";
      return n > 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
