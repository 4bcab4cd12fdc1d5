// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "mplite/common/error.hpp"

namespace mplite::metrics {

using nlohmann::json;

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

std::string cell(const MetricSummary& s) { return percent(s.mean) + " (" + percent(s.std) + ")"; }

std::string signed_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.2f", 100.0 * v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& r : rows) {
    if (widths.size() < r.size()) widths.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += i + 1 == r.size() ? r[i] : pad(r[i], widths[i] + 2);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

MetricsReport aggregate_runs(std::vector<RunMetrics> runs, std::vector<std::string> metric_names) {
  if (runs.empty()) throw ValidationError("aggregate_runs: no runs");
  std::stable_sort(runs.begin(), runs.end(), [](const RunMetrics& a, const RunMetrics& b) { return a.seed < b.seed; });
  if (metric_names.empty()) {
    for (const auto& [name, value] : runs.front().values) metric_names.push_back(name);
  }
  MetricsReport r;
  r.n_runs = runs.size();
  for (const auto& run : runs) {
    r.seeds.push_back(run.seed);
    if (run.values.size() != metric_names.size()) {
      throw ValidationError("aggregate_runs: runs report different metric sets");
    }
  }
  for (const auto& name : metric_names) {
    std::vector<double> xs;
    for (const auto& run : runs) {
      const auto it = run.values.find(name);
      if (it == run.values.end()) throw ValidationError("aggregate_runs: run is missing metric " + name);
      xs.push_back(it->second);
    }
    MetricSummary s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
      double ss = 0.0;
      for (double x : xs) ss += (x - s.mean) * (x - s.mean);
      s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    r.summary[name] = s;
  }
  r.metric_names = std::move(metric_names);
  r.per_run = std::move(runs);
  return r;
}

std::string report_to_json(const MetricsReport& r) {
  json runs = json::array();
  for (const auto& run : r.per_run) {
    json values = json::object();
    for (const auto& [k, v] : run.values) values[k] = number(v);
    runs.push_back({{"seed", run.seed}, {"metrics", values}});
  }
  json summary = json::object();
  for (const auto& [k, s] : r.summary) summary[k] = {{"mean", number(s.mean)}, {"std", number(s.std)}};
  const json j{{"model", r.model},   {"mode", r.mode},         {"task", r.task},
               {"n_runs", r.n_runs}, {"single_run", r.single_run()}, {"seeds", r.seeds},
               {"metric_names", r.metric_names}, {"per_run", runs}, {"summary", summary}};
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    auto value = [](const json& v) { return v.is_null() ? std::nan("") : v.get<double>(); };
    MetricsReport r;
    r.model = j.at("model").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.task = j.at("task").get<std::string>();
    r.n_runs = j.at("n_runs").get<std::size_t>();
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.metric_names = j.at("metric_names").get<std::vector<std::string>>();
    for (const auto& run : j.at("per_run")) {
      RunMetrics m;
      m.seed = run.at("seed").get<std::uint64_t>();
      for (const auto& [k, v] : run.at("metrics").items()) m.values[k] = value(v);
      r.per_run.push_back(std::move(m));
    }
    for (const auto& [k, v] : j.at("summary").items()) r.summary[k] = {value(v.at("mean")), value(v.at("std"))};
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("metrics report: ") + e.what());
  }
}

std::string display_name(std::string_view metric) {
  if (metric == "w_f1") return "w-F1";
  if (metric == "auc") return "AUC";
  if (metric == "f1") return "F1";
  if (metric.starts_with("r_at_")) return "R@" + std::string(metric.substr(5));
  return std::string(metric);
}

std::string format_report(const MetricsReport& r) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Model", "Task"};
  for (const auto& m : r.metric_names) header.push_back(display_name(m));
  rows.push_back(header);
  std::vector<std::string> row{r.mode == "mplite" ? r.model + "+MPLite" : r.model, r.task};
  for (const auto& m : r.metric_names) row.push_back(cell(r.summary.at(m)));
  rows.push_back(row);
  std::string out = render(rows);
  out += "runs: " + std::to_string(r.n_runs) + (r.single_run() ? " (single run, std reported as 0)" : "") + "\n";
  return out;
}

namespace {

struct TaskPair {
  std::string task;
  std::optional<MetricsReport> baseline;
  std::optional<MetricsReport> mplite;
  std::vector<std::string> metrics;
};

std::vector<TaskPair> pair_up(const std::vector<MetricsReport>& reports) {
  std::vector<TaskPair> pairs;
  for (const std::string task : {"dg", "hf"}) {
    TaskPair p{task, std::nullopt, std::nullopt, {}};
    for (const auto& r : reports) {
      if (r.task != task) continue;
      (r.mode == "mplite" ? p.mplite : p.baseline) = r;
      if (p.metrics.empty()) p.metrics = r.metric_names;
    }
    if (p.baseline || p.mplite) pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace

std::string format_comparison(const std::vector<MetricsReport>& reports) {
  const auto pairs = pair_up(reports);
  if (pairs.empty()) throw ValidationError("report: no metrics to compare");
  const std::string model = reports.front().model;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Model"};
  for (const auto& p : pairs) {
    for (const auto& m : p.metrics) header.push_back(p.task == "dg" ? "DG " + display_name(m) : "HF " + display_name(m));
  }
  rows.push_back(header);
  std::vector<std::string> base{model}, plus{model + "+MPLite"}, delta{"Delta"};
  for (const auto& p : pairs) {
    for (const auto& m : p.metrics) {
      base.push_back(p.baseline ? cell(p.baseline->summary.at(m)) : "-");
      plus.push_back(p.mplite ? cell(p.mplite->summary.at(m)) : "-");
      delta.push_back(p.baseline && p.mplite
                          ? signed_percent(p.mplite->summary.at(m).mean - p.baseline->summary.at(m).mean)
                          : "-");
    }
  }
  rows.push_back(base);
  rows.push_back(plus);
  rows.push_back(delta);
  return "Mean (std) over repeated runs, in percent.\n" + render(rows);
}

std::string comparison_to_json(const std::vector<MetricsReport>& reports) {
  json tasks = json::object();
  for (const auto& p : pair_up(reports)) {
    json t = json::object();
    for (const auto& m : p.metrics) {
      json entry = json::object();
      if (p.baseline) entry["baseline"] = {{"mean", number(p.baseline->summary.at(m).mean)},
                                           {"std", number(p.baseline->summary.at(m).std)}};
      if (p.mplite) entry["mplite"] = {{"mean", number(p.mplite->summary.at(m).mean)},
                                       {"std", number(p.mplite->summary.at(m).std)}};
      if (p.baseline && p.mplite) {
        entry["delta"] = number(p.mplite->summary.at(m).mean - p.baseline->summary.at(m).mean);
      }
      t[m] = entry;
    }
    if (p.baseline) t["n_runs_baseline"] = p.baseline->n_runs;
    if (p.mplite) t["n_runs_mplite"] = p.mplite->n_runs;
    tasks[p.task] = t;
  }
  return json{{"model", reports.empty() ? "GRU" : reports.front().model}, {"tasks", tasks}}.dump(2) + "\n";
}

}  // namespace mplite::metrics
