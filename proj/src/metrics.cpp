#include "ovd/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ovd {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_metrics_row(const EpochStats& row) {
  std::string line = std::to_string(row.epoch);
  for (double v : {row.eval_return_mean, row.eval_return_std, row.epistemic_mean,
                   row.aleatoric_mean, row.m_mean, row.shift_norm_mean}) {
    line += ',';
    line += format_double(v);
  }
  return line;
}

EpochStats parse_metrics_row(const std::string& line) {
  std::istringstream in(line);
  std::string field;
  std::vector<double> values;
  while (std::getline(in, field, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{}) throw std::runtime_error("metrics: malformed field '" + field + "'");
    values.push_back(v);
  }
  if (values.size() != 7) throw std::runtime_error("metrics: expected 7 fields per row");
  EpochStats row;
  row.epoch = static_cast<int>(values[0]);
  row.eval_return_mean = values[1];
  row.eval_return_std = values[2];
  row.epistemic_mean = values[3];
  row.aleatoric_mean = values[4];
  row.m_mean = values[5];
  row.shift_norm_mean = values[6];
  return row;
}

RunMetrics load_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("metrics: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader)
    throw std::runtime_error("metrics: bad header in " + path);
  RunMetrics metrics;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    metrics.rows.push_back(parse_metrics_row(line));
  }
  return metrics;
}

std::optional<int> frg_epoch(const RunMetrics& metrics, double threshold) {
  for (const EpochStats& row : metrics.rows)
    if (row.eval_return_mean >= threshold) return row.epoch;
  return std::nullopt;
}

std::string frg_label(const std::optional<int>& epoch, int max_epochs) {
  if (epoch) return std::to_string(*epoch);
  return std::to_string(max_epochs) + "+";
}

double final_return(const RunMetrics& metrics) {
  const std::size_t n = metrics.rows.size();
  if (n == 0) throw std::invalid_argument("final_return: empty metrics");
  std::size_t window = static_cast<std::size_t>(std::llround(0.08 * static_cast<double>(n)));
  window = std::clamp<std::size_t>(window, 1, std::min<std::size_t>(100, n));
  double sum = 0.0;
  for (std::size_t i = n - window; i < n; ++i) sum += metrics.rows[i].eval_return_mean;
  return sum / static_cast<double>(window);
}

Summary summarize(const std::string& algorithm, int max_epochs, const std::vector<int>& seeds,
                  const std::vector<RunMetrics>& runs, double frg_threshold) {
  if (seeds.size() != runs.size())
    throw std::invalid_argument("summarize: seed/run count mismatch");
  Summary summary;
  summary.algorithm = algorithm;
  summary.epochs = max_epochs;
  double sum = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    SeedSummary s;
    s.seed = seeds[i];
    s.final_return = final_return(runs[i]);
    s.frg = frg_label(frg_epoch(runs[i], frg_threshold), max_epochs);
    sum += s.final_return;
    summary.seeds.push_back(std::move(s));
  }
  const double n = static_cast<double>(runs.size());
  summary.final_return_mean = sum / n;
  if (runs.size() > 1) {
    double sq = 0.0;
    for (const SeedSummary& s : summary.seeds) {
      const double d = s.final_return - summary.final_return_mean;
      sq += d * d;
    }
    summary.final_return_std = std::sqrt(sq / (n - 1.0));
  }
  return summary;
}

}  // namespace ovd
