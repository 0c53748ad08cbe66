#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "ovd/metrics.hpp"

using namespace ovd;

namespace {

RunMetrics with_returns(const std::vector<double>& returns) {
  RunMetrics m;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    EpochStats row;
    row.epoch = static_cast<int>(i);
    row.eval_return_mean = returns[i];
    m.rows.push_back(row);
  }
  return m;
}

}  // namespace

TEST_CASE("metrics rows round-trip through text exactly") {
  EpochStats row;
  row.epoch = 42;
  row.eval_return_mean = 12.3456789012345;
  row.eval_return_std = 1e-9;
  row.epistemic_mean = 0.1 + 0.2;  // deliberately non-representable
  row.aleatoric_mean = -7.25;
  row.m_mean = 1.0000000000000002;
  row.shift_norm_mean = 0.0;
  const EpochStats back = parse_metrics_row(format_metrics_row(row));
  CHECK(back.epoch == row.epoch);
  CHECK(back.eval_return_mean == row.eval_return_mean);
  CHECK(back.eval_return_std == row.eval_return_std);
  CHECK(back.epistemic_mean == row.epistemic_mean);
  CHECK(back.aleatoric_mean == row.aleatoric_mean);
  CHECK(back.m_mean == row.m_mean);
  CHECK(back.shift_norm_mean == row.shift_norm_mean);
}

TEST_CASE("frg epoch finds the first threshold crossing") {
  std::vector<double> returns(400, 0.0);
  returns[229] = 100.0;
  returns[300] = 100.0;
  const RunMetrics m = with_returns(returns);
  CHECK(frg_epoch(m).value() == 229);
  CHECK(frg_label(frg_epoch(m), 1250) == "229");

  const RunMetrics never = with_returns(std::vector<double>(50, 40.0));
  CHECK_FALSE(frg_epoch(never).has_value());
  CHECK(frg_label(frg_epoch(never), 1250) == "1250+");

  std::vector<double> immediate(10, 0.0);
  immediate[0] = 100.0;
  CHECK(frg_epoch(with_returns(immediate)).value() == 0);
}

TEST_CASE("final return averages the trailing window") {
  // 1250 epochs: trailing 8% = 100 rows
  std::vector<double> returns(1250, 0.0);
  for (std::size_t i = 1150; i < 1250; ++i) returns[i] = 80.0;
  CHECK(final_return(with_returns(returns)) == doctest::Approx(80.0));

  // 2000 epochs: 8% = 160 > 100, capped at the last 100
  std::vector<double> large(2000, 0.0);
  for (std::size_t i = 1900; i < 2000; ++i) large[i] = 50.0;
  CHECK(final_return(with_returns(large)) == doctest::Approx(50.0));

  // tiny runs still use at least one row
  CHECK(final_return(with_returns({10.0, 30.0})) == doctest::Approx(30.0));
}

TEST_CASE("summary mean over per-seed finals") {
  std::vector<RunMetrics> runs;
  for (double v : {0.0, 100.0, 0.0, 0.0, 0.0}) runs.push_back(with_returns({v}));
  const Summary s = summarize("ovde_g", 1250, {1, 2, 3, 4, 5}, runs);
  CHECK(s.final_return_mean == doctest::Approx(20.0));
  CHECK(s.seeds[1].frg == "0");
  CHECK(s.seeds[0].frg == "1250+");
}

TEST_CASE("metrics file loads back exactly what was written") {
  const std::string path = "test_metrics_roundtrip.csv";
  {
    std::ofstream out(path);
    out << kMetricsHeader << "\n";
    EpochStats row;
    row.epoch = 0;
    row.eval_return_mean = 30.0;
    row.epistemic_mean = 0.123456789123456789;
    out << format_metrics_row(row) << "\n";
  }
  const RunMetrics m = load_metrics(path);
  REQUIRE(m.rows.size() == 1);
  CHECK(m.rows[0].eval_return_mean == 30.0);
  CHECK(m.rows[0].epistemic_mean == 0.123456789123456789);
  std::remove(path.c_str());

  CHECK_THROWS(load_metrics("does_not_exist.csv"));
}
