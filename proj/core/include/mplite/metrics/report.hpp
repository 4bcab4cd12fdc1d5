// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mplite::metrics {

struct RunMetrics {
  std::uint64_t seed = 0;
  std::map<std::string, double> values;  // e.g. "w_f1", "r_at_10", "auc"
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single run
};

struct MetricsReport {
  std::string model = "GRU";
  std::string mode;  // "baseline" or "mplite"
  std::string task;  // "dg" or "hf"
  std::size_t n_runs = 0;
  std::vector<std::uint64_t> seeds;  // ascending
  std::vector<std::string> metric_names;
  std::vector<RunMetrics> per_run;  // ordered like seeds
  std::map<std::string, MetricSummary> summary;

  bool single_run() const noexcept { return n_runs == 1; }
};

// Orders runs by seed and computes mean and n-1 standard deviation of every
// metric. All runs must report the same metric names.
MetricsReport aggregate_runs(std::vector<RunMetrics> runs, std::vector<std::string> metric_names = {});

std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(std::string_view text);

// Short label for a metric key: "w_f1" -> "w-F1", "r_at_10" -> "R@10".
std::string display_name(std::string_view metric);

// Single report as an aligned table, percentages with the std in brackets.
std::string format_report(const MetricsReport& report);

// Baseline vs. mplite rows per task with a delta row (mplite mean minus
// baseline mean, in percentage points).
std::string format_comparison(const std::vector<MetricsReport>& reports);
std::string comparison_to_json(const std::vector<MetricsReport>& reports);

}  // namespace mplite::metrics
