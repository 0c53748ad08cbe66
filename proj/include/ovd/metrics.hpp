#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ovd/agent.hpp"

namespace ovd {

inline constexpr const char* kMetricsHeader =
    "epoch,eval_return_mean,eval_return_std,epistemic_mean,aleatoric_mean,m_mean,shift_norm_mean";

struct RunMetrics {
  std::vector<EpochStats> rows;
};

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double value);

std::string format_metrics_row(const EpochStats& row);
EpochStats parse_metrics_row(const std::string& line);

RunMetrics load_metrics(const std::string& path);

/// Smallest epoch whose evaluation return reaches the threshold.
std::optional<int> frg_epoch(const RunMetrics& metrics, double threshold = 100.0);

/// "229", or "1250+" when the goal was never reached within max_epochs.
std::string frg_label(const std::optional<int>& epoch, int max_epochs);

/// Mean evaluation return over the trailing 8% of epochs, capped at the last
/// 100, minimum one row.
double final_return(const RunMetrics& metrics);

struct SeedSummary {
  int seed = 0;
  double final_return = 0.0;
  std::string frg;
};

struct Summary {
  std::string algorithm;
  int epochs = 0;
  std::vector<SeedSummary> seeds;
  double final_return_mean = 0.0;
  double final_return_std = 0.0;  // sample std over seeds
};

Summary summarize(const std::string& algorithm, int max_epochs, const std::vector<int>& seeds,
                  const std::vector<RunMetrics>& runs, double frg_threshold = 100.0);

}  // namespace ovd
