#include "ovd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "json.hpp"

namespace ovd {

namespace fs = std::filesystem;
using nlohmann::json;

RunMetrics run_seed(const ExperimentConfig& config, int seed, const EpochSink& on_epoch,
                    VisitGrid* visits) {
  const std::uint64_t root = static_cast<std::uint64_t>(seed);
  DsacAgent agent(make_agent_config(config), root);
  auto train_env = make_env(config, root, StreamId::kEnvNoise);
  auto eval_env = make_env(config, root, StreamId::kEvalEnvNoise);

  TrainLoopConfig loop;
  loop.epochs = config.epochs;
  loop.steps_per_epoch = config.steps_per_epoch;
  loop.eval_episodes = config.eval_episodes;

  RunMetrics metrics;
  const EpochSink sink = [&](const EpochStats& row) {
    metrics.rows.push_back(row);
    if (on_epoch) on_epoch(row);
  };
  const StepSink step_sink = [&](const Eigen::VectorXd& next_state) {
    if (visits && next_state.size() >= 2)
      visits->add(Eigen::Vector2d(next_state[0], next_state[1]));
  };
  train_run(agent, *train_env, *eval_env, loop, sink, visits ? step_sink : StepSink{});
  return metrics;
}

namespace {

std::string metrics_path(const std::string& dir, int seed) {
  return dir + "/metrics_seed" + std::to_string(seed) + ".csv";
}

std::string visits_path(const std::string& dir, int seed) {
  return dir + "/visits_seed" + std::to_string(seed) + ".csv";
}

}  // namespace

std::string summary_json(const Summary& summary) {
  json j;
  j["algo"] = summary.algorithm;
  j["epochs"] = summary.epochs;
  j["final_return_mean"] = summary.final_return_mean;
  j["final_return_std"] = summary.final_return_std;
  j["seeds"] = json::array();
  for (const SeedSummary& s : summary.seeds)
    j["seeds"].push_back({{"seed", s.seed}, {"final_return", s.final_return}, {"frg", s.frg}});
  return j.dump(2) + "\n";
}

int run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
  config.validate();
  fs::create_directories(out_dir);
  write_config_file(config, out_dir + "/config.json");

  const std::size_t n = config.seeds.size();
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const int seed = config.seeds[i];
      try {
        std::ofstream out(metrics_path(out_dir, seed));
        if (!out) throw std::runtime_error("cannot write metrics file");
        out << kMetricsHeader << "\n";
        VisitGrid visits(config.heatmap_bins, config.heatmap_bins, config.env.gridchaos.bounds);
        const EpochSink sink = [&out](const EpochStats& row) {
          out << format_metrics_row(row) << "\n";
          out.flush();  // rows parse at any interruption point
        };
        run_seed(config, seed, sink, &visits);
        write_grid_csv(visits, visits_path(out_dir, seed));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  std::size_t slots = config.max_parallel_seeds > 0
                          ? static_cast<std::size_t>(config.max_parallel_seeds)
                          : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  slots = std::min(slots, n);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i + 1 < slots; ++i) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();

  bool failed = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      std::cerr << "seed " << config.seeds[i] << " failed: " << errors[i] << "\n";
      failed = true;
    }
  }
  if (failed) return 1;

  summarize_dir(out_dir);
  return 0;
}

Summary summarize_dir(const std::string& dir, bool write_file) {
  const ExperimentConfig config = load_config_file(dir + "/config.json");
  std::vector<RunMetrics> runs;
  runs.reserve(config.seeds.size());
  for (int seed : config.seeds) runs.push_back(load_metrics(metrics_path(dir, seed)));
  Summary summary =
      summarize(algorithm_name(config.algorithm), config.epochs, config.seeds, runs);
  if (write_file) {
    std::ofstream out(dir + "/summary.json");
    if (!out) throw std::runtime_error("summary: cannot write " + dir + "/summary.json");
    out << summary_json(summary);
  }
  return summary;
}

int export_heatmaps_dir(const std::string& dir) {
  int exported = 0;
  std::vector<fs::path> grids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("visits_seed", 0) == 0 && entry.path().extension() == ".csv")
      grids.push_back(entry.path());
  }
  std::sort(grids.begin(), grids.end());
  for (const fs::path& p : grids) {
    const VisitGrid grid = load_grid_csv(p.string());
    std::string base = p.string();
    base.replace(base.find("visits_seed"), std::string("visits_seed").size(), "heatmap_seed");
    base = base.substr(0, base.size() - 4);  // drop .csv
    export_heatmap(grid, base);
    ++exported;
  }
  return exported;
}

}  // namespace ovd
