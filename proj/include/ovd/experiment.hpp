#pragma once

#include <string>

#include "ovd/config.hpp"
#include "ovd/heatmap.hpp"
#include "ovd/metrics.hpp"

namespace ovd {

/// Trains one seed end to end: metrics rows flow to `on_epoch` as they are
/// produced, visitation counts into `visits` when given.
RunMetrics run_seed(const ExperimentConfig& config, int seed, const EpochSink& on_epoch,
                    VisitGrid* visits);

/// Runs every seed (parallel worker slots), writing per-seed
/// metrics_seed<k>.csv and visits_seed<k>.csv files plus summary.json under
/// `out_dir`. Returns 0 on success; on a mid-run failure partial files are
/// retained and the exit code is nonzero.
int run_experiment(const ExperimentConfig& config, const std::string& out_dir);

/// Recomputes the summary from the files in a run directory and writes
/// summary.json; identical to what run_experiment emits.
Summary summarize_dir(const std::string& dir, bool write_file = true);

std::string summary_json(const Summary& summary);

/// Converts every visits_seed<k>.csv in the directory into a PGM heatmap plus
/// its numeric grid copy.
int export_heatmaps_dir(const std::string& dir);

}  // namespace ovd
