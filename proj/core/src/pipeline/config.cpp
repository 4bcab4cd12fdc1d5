// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/pipeline/config.hpp"

#include <cmath>
#include <initializer_list>
#include <set>
#include <string>

#include "json.hpp"
#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"

namespace mplite::pipeline {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError("config: '" + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) throw ValidationError("config: unknown key '" + where + (where.empty() ? "" : ".") + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config: key '" + where + (where.empty() ? "" : ".") + key + "' has the wrong type");
  }
}

nn::LrSchedule read_schedule(const json& obj, const std::string& where, nn::LrSchedule s) {
  read(obj, "lr_start", s.start, where);
  read(obj, "lr_end", s.end, where);
  std::string kind(nn::to_string(s.kind));
  read(obj, "lr_schedule", kind, where);
  s.kind = nn::parse_schedule(kind);
  read(obj, "lr_steps", s.steps, where);
  if (!(s.start > 0.0 && s.end > 0.0)) throw ValidationError("config: " + where + " learning rates must be positive");
  if (s.steps < 1) throw ValidationError("config: " + where + ".lr_steps must be at least 1");
  return s;
}

}  // namespace

std::vector<std::uint64_t> consecutive_seeds(std::uint64_t first, std::size_t n) {
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = first + i;
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, "", {"version", "out_dir", "data", "synth", "split", "pretrain", "downstream", "task", "n_runs",
                     "seeds", "eval", "threads"});
  ExperimentConfig c;
  if (!j.contains("version")) throw ValidationError("config: missing 'version'");
  read(j, "version", c.version, "");
  if (c.version != kConfigVersion) {
    throw ValidationError("config: unsupported version " + std::to_string(c.version) + " (expected " +
                          std::to_string(kConfigVersion) + ")");
  }
  std::string out_dir;
  read(j, "out_dir", out_dir, "");
  if (out_dir.empty()) throw ValidationError("config: missing 'out_dir'");
  c.out_dir = out_dir;

  if (j.contains("data")) {
    const auto& d = j.at("data");
    check_keys(d, "data", {"dir"});
    std::string dir;
    read(d, "dir", dir, "data");
    if (!dir.empty()) c.data_dir = std::filesystem::path(dir);
  }

  if (j.contains("synth")) {
    const auto& s = j.at("synth");
    check_keys(s, "synth", {"seed", "n_diag", "n_lab", "n_patients", "single_visit_fraction", "min_visits",
                            "max_visits", "max_conditions", "labs_per_disease", "unique_labs", "n_heart_failure",
                            "prevalence_exponent", "lab_flip_rate", "persistence", "onset_rate", "miss_rate"});
    ehr::GenConfig g;
    read(s, "seed", c.synth_seed, "synth");
    read(s, "n_diag", g.n_diag, "synth");
    read(s, "n_lab", g.n_lab, "synth");
    read(s, "n_patients", g.n_patients, "synth");
    read(s, "single_visit_fraction", g.single_visit_fraction, "synth");
    read(s, "min_visits", g.min_visits, "synth");
    read(s, "max_visits", g.max_visits, "synth");
    read(s, "max_conditions", g.max_conditions, "synth");
    read(s, "labs_per_disease", g.labs_per_disease, "synth");
    read(s, "unique_labs", g.unique_labs, "synth");
    read(s, "n_heart_failure", g.n_heart_failure, "synth");
    read(s, "prevalence_exponent", g.prevalence_exponent, "synth");
    read(s, "lab_flip_rate", g.lab_flip_rate, "synth");
    read(s, "persistence", g.persistence, "synth");
    read(s, "onset_rate", g.onset_rate, "synth");
    read(s, "miss_rate", g.miss_rate, "synth");
    ehr::validate(g);
    c.synth = g;
  }

  if (j.contains("split")) {
    const auto& s = j.at("split");
    check_keys(s, "split", {"train", "val", "test", "seed"});
    read(s, "train", c.split.train, "split");
    read(s, "val", c.split.val, "split");
    read(s, "test", c.split.test, "split");
    read(s, "seed", c.split_seed, "split");
  }

  if (j.contains("pretrain")) {
    const auto& p = j.at("pretrain");
    check_keys(p, "pretrain", {"hidden", "batch_size", "epochs", "lr_start", "lr_end", "lr_schedule", "lr_steps",
                               "patience", "holdout_fraction", "encoder_activation", "seed"});
    read(p, "hidden", c.pretrain.hidden, "pretrain");
    read(p, "batch_size", c.pretrain.batch_size, "pretrain");
    read(p, "epochs", c.pretrain.epochs, "pretrain");
    read(p, "patience", c.pretrain.patience, "pretrain");
    read(p, "holdout_fraction", c.pretrain.holdout_fraction, "pretrain");
    std::string act(nn::to_string(c.pretrain.encoder_activation));
    read(p, "encoder_activation", act, "pretrain");
    c.pretrain.encoder_activation = nn::parse_activation(act);
    read(p, "seed", c.pretrain_seed, "pretrain");
    c.pretrain.lr = read_schedule(p, "pretrain", c.pretrain.lr);
  }

  if (j.contains("downstream")) {
    const auto& d = j.at("downstream");
    check_keys(d, "downstream", {"gru_hidden", "projection_dim", "dropout", "batch_size", "epochs", "lr_start",
                                 "lr_end", "lr_schedule", "lr_steps", "sliding_window"});
    read(d, "gru_hidden", c.downstream.gru_hidden, "downstream");
    read(d, "projection_dim", c.downstream.projection_dim, "downstream");
    read(d, "dropout", c.downstream.dropout, "downstream");
    read(d, "batch_size", c.downstream.batch_size, "downstream");
    read(d, "epochs", c.downstream.epochs, "downstream");
    read(d, "sliding_window", c.sliding_window, "downstream");
    c.downstream.lr = read_schedule(d, "downstream", c.downstream.lr);
  }

  if (j.contains("task")) {
    std::string task;
    read(j, "task", task, "");
    if (task == "both") {
      c.tasks = {ehr::Task::dg, ehr::Task::hf};
    } else {
      c.tasks = {ehr::parse_task(task)};
    }
  }

  read(j, "n_runs", c.n_runs, "");
  if (j.contains("seeds")) {
    read(j, "seeds", c.seeds, "");
    if (!j.contains("n_runs")) c.n_runs = c.seeds.size();
  } else {
    c.seeds = consecutive_seeds(1, c.n_runs);
  }

  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    check_keys(e, "eval", {"threshold", "ks"});
    read(e, "threshold", c.downstream.threshold, "eval");
    read(e, "ks", c.ks, "eval");
  }
  read(j, "threads", c.threads, "");

  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.out_dir.empty()) throw ValidationError("config: out_dir is empty");
  if (c.split.train < 0 || c.split.val < 0 || c.split.test < 0 ||
      std::abs(c.split.train + c.split.val + c.split.test - 1.0) > 1e-9) {
    throw ValidationError("config: split ratios must be non-negative and sum to 1");
  }
  pretrain::validate(c.pretrain);
  fusion::validate(c.downstream);
  if (c.n_runs < 1) throw ValidationError("config: n_runs must be at least 1");
  if (c.seeds.size() != c.n_runs) {
    throw ValidationError("config: seeds lists " + std::to_string(c.seeds.size()) + " entries but n_runs is " +
                          std::to_string(c.n_runs));
  }
  const std::set<std::uint64_t> unique(c.seeds.begin(), c.seeds.end());
  if (unique.size() != c.seeds.size()) throw ValidationError("config: seeds must be distinct");
  if (c.ks.empty()) throw ValidationError("config: eval.ks must not be empty");
  for (std::size_t k : c.ks) {
    if (k == 0) throw ValidationError("config: eval.ks entries must be at least 1");
  }
  if (c.threads < 1) throw ValidationError("config: threads must be at least 1");
  if (c.tasks.empty()) throw ValidationError("config: no task selected");
  if (!c.synth && !c.data_dir) throw ValidationError("config: provide either 'synth' or 'data.dir'");
  if (!c.synth && !std::filesystem::is_directory(*c.data_dir)) {
    throw ValidationError("config: data.dir " + c.data_dir->string() + " does not exist");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ValidationError("config file " + path.string() + " does not exist");
  try {
    return parse_config(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace mplite::pipeline
