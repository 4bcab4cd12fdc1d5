// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/pipeline/commands.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "json.hpp"
#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"
#include "mplite/common/hash.hpp"
#include "mplite/common/log.hpp"
#include "mplite/ehr/cohort.hpp"
#include "mplite/ehr/dataset.hpp"
#include "mplite/ehr/synth.hpp"
#include "mplite/fusion/checkpoint.hpp"
#include "mplite/fusion/train.hpp"
#include "mplite/nn/rng.hpp"
#include "mplite/pipeline/parallel.hpp"
#include "mplite/pretrain/checkpoint.hpp"
#include "mplite/pretrain/train.hpp"

namespace mplite::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path Layout::train_dir(fusion::Mode mode, ehr::Task task) const {
  return out_dir / "train" / (std::string(fusion::to_string(mode)) + "-" + std::string(ehr::to_string(task)));
}

fs::path Layout::experiment(fusion::Mode mode, ehr::Task task, std::uint64_t seed) const {
  return train_dir(mode, task) / ("seed-" + std::to_string(seed) + ".ckpt.json");
}

fs::path Layout::metrics_json(fusion::Mode mode, ehr::Task task) const {
  return out_dir / "eval" /
         (std::string(fusion::to_string(mode)) + "-" + std::string(ehr::to_string(task)) + ".metrics.json");
}

fs::path Layout::metrics_text(fusion::Mode mode, ehr::Task task) const {
  return out_dir / "eval" /
         (std::string(fusion::to_string(mode)) + "-" + std::string(ehr::to_string(task)) + ".metrics.txt");
}

Layout layout_for(const ExperimentConfig& config) { return Layout{config.out_dir, config.resolved_data_dir()}; }

namespace {

std::vector<ehr::Task> selected_tasks(const ExperimentConfig& c, const CommandOptions& o) {
  return o.task ? std::vector<ehr::Task>{*o.task} : c.tasks;
}

std::vector<fusion::Mode> selected_modes(const CommandOptions& o) {
  return o.mode ? std::vector<fusion::Mode>{*o.mode}
                : std::vector<fusion::Mode>{fusion::Mode::baseline, fusion::Mode::mplite};
}

std::vector<std::uint64_t> run_seeds(const ExperimentConfig& c, const CommandOptions& o) {
  return o.seed ? consecutive_seeds(*o.seed, c.n_runs) : c.seeds;
}

void require(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path)) {
    throw ValidationError(path.string() + " is missing; run '" + producer + "' with the same config first");
  }
}

std::string split_to_json(const ehr::DatasetSplit& s) {
  return json{{"seed", s.seed}, {"train", s.train}, {"val", s.val}, {"test", s.test}}.dump(1) + "\n";
}

ehr::DatasetSplit split_from_json(const fs::path& path) {
  try {
    const json j = json::parse(read_file(path));
    ehr::DatasetSplit s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.train = j.at("train").get<std::vector<std::string>>();
    s.val = j.at("val").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

// Dataset and split as produced by the ingest stage, with the vocabularies
// checked against the fingerprints ingest recorded.
struct Context {
  ehr::Dataset data;
  ehr::DatasetSplit split;
};

Context load_context(const Layout& layout) {
  require(layout.ingest_manifest(), "ingest");
  require(layout.split_file(), "ingest");
  Context ctx{ehr::load_dataset(layout.data_dir), split_from_json(layout.split_file())};
  json manifest;
  try {
    manifest = json::parse(read_file(layout.ingest_manifest()));
  } catch (const json::exception& e) {
    throw DataError(layout.ingest_manifest().string() + ": " + e.what());
  }
  if (manifest.value("diag_vocab_fingerprint", "") != ctx.data.diag_vocab.fingerprint() ||
      manifest.value("lab_vocab_fingerprint", "") != ctx.data.lab_vocab.fingerprint()) {
    throw ValidationError("the data in " + layout.data_dir.string() +
                          " changed since ingest (vocabulary fingerprint mismatch); rerun 'ingest'");
  }
  return ctx;
}

std::vector<ehr::TaskSample> task_samples(const ehr::Dataset& data, const std::vector<std::string>& ids,
                                          ehr::Task task, bool windows) {
  std::vector<ehr::TaskSample> out;
  for (const auto& id : ids) {
    const auto& patient = data.patient(id);
    if (windows) {
      auto w = ehr::make_window_samples(patient, task, data.diag_vocab, data.lab_vocab);
      for (auto& s : w) out.push_back(std::move(s));
    } else {
      out.push_back(ehr::make_sample(patient, task, data.diag_vocab, data.lab_vocab));
    }
  }
  return out;
}

std::shared_ptr<const pretrain::PretrainedLabModule> load_lab_module(const Layout& layout, const ehr::Dataset& data,
                                                                     std::string* sha) {
  if (!fs::exists(layout.lab_module())) {
    throw ValidationError("mplite mode needs a lab-module checkpoint at " + layout.lab_module().string() +
                          "; run 'pretrain' with the same config first");
  }
  auto module = std::make_shared<const pretrain::PretrainedLabModule>(
      pretrain::load_module(layout.lab_module(), data.lab_vocab, data.diag_vocab));
  *sha = sha256_file(layout.lab_module());
  return module;
}

}  // namespace

void cmd_synth(const ExperimentConfig& config, const CommandOptions& options) {
  if (!config.synth) throw ValidationError("synth: the config has no 'synth' section");
  const std::uint64_t seed = options.seed.value_or(config.synth_seed);
  const auto layout = layout_for(config);
  const auto data = ehr::synth_generate(*config.synth, seed);
  ehr::write_synth_dataset(data, layout.data_dir);

  std::size_t single = 0;
  std::map<std::string, std::size_t> visits;
  for (const auto& a : data.admissions) ++visits[a.patient_id];
  for (const auto& [id, n] : visits) single += n == 1 ? 1 : 0;
  json files = json::object();
  for (const auto name : {ehr::kAdmissionsFile, ehr::kDiagnosesFile, ehr::kLabeventsFile, ehr::kGroundTruthFile}) {
    files[std::string(name)] = sha256_file(layout.data_dir / name);
  }
  const json manifest{{"seed", seed},
                      {"patients", visits.size()},
                      {"patients_single", single},
                      {"patients_multi", visits.size() - single},
                      {"admissions_rows", data.admissions.size()},
                      {"diagnoses_rows", data.diagnoses.size()},
                      {"labevents_rows", data.labevents.size()},
                      {"files_sha256", files}};
  write_file_atomic(layout.data_dir / "manifest.json", manifest.dump(2) + "\n");
  log_info("synth: wrote " + std::to_string(visits.size()) + " patients to " + layout.data_dir.string());
}

void cmd_ingest(const ExperimentConfig& config, const CommandOptions& options) {
  const auto layout = layout_for(config);
  const auto data = ehr::load_dataset(layout.data_dir);
  if (!config.synth) {
    ehr::check_vocabulary_size(data.diag_vocab, ehr::kMimic3DiagnosisCodes);
    ehr::check_vocabulary_size(data.lab_vocab, ehr::kMimic3LabItems);
  }
  if (data.multi_visit_count() == 0 || data.cohorts.prediction.size() == 0) {
    throw ValidationError("ingest: no multi-visit patients with coded diagnoses; the prediction cohort is empty");
  }
  const auto split = ehr::split_dataset(data.cohorts.prediction, config.split, options.seed.value_or(config.split_seed));

  std::size_t single_utilized = 0;
  for (const auto& id : data.cohorts.pretrain.patient_ids) single_utilized += data.patient(id).visit_count() == 1;
  std::size_t visits = 0;
  for (const auto& p : data.patients) visits += p.visit_count();
  pretrain::PretrainSetStats stats;
  const auto pretrain_set = pretrain::build_pretrain_set(data, split.train, &stats);
  auto hf_positives = [&](const std::vector<std::string>& ids) {
    std::size_t n = 0;
    for (const auto& s : task_samples(data, ids, ehr::Task::hf, false)) n += s.hf_positive() ? 1 : 0;
    return n;
  };

  const json manifest{
      {"patients_total", data.patients.size()},
      {"patients_multi", data.multi_visit_count()},
      {"patients_single", data.single_visit_count()},
      {"patients_single_utilized", single_utilized},
      {"visits_total", visits},
      {"n_diag_codes", data.diag_vocab.size()},
      {"n_lab_items", data.lab_vocab.size()},
      {"pretrain_cohort", data.cohorts.pretrain.size()},
      {"prediction_cohort", data.cohorts.prediction.size()},
      {"pretrain_set",
       {{"size", pretrain_set.size()},
        {"single_visit", stats.single_visit},
        {"multi_visit", stats.multi_visit},
        {"excluded_multi_visit", stats.excluded_multi_visit},
        {"dropped_empty_target", stats.dropped_empty_target}}},
      {"split",
       {{"seed", split.seed},
        {"train", split.train.size()},
        {"val", split.val.size()},
        {"test", split.test.size()},
        {"hf_positive_train", hf_positives(split.train)},
        {"hf_positive_val", hf_positives(split.val)},
        {"hf_positive_test", hf_positives(split.test)}}},
      {"diag_vocab_fingerprint", data.diag_vocab.fingerprint()},
      {"lab_vocab_fingerprint", data.lab_vocab.fingerprint()}};
  write_file_atomic(layout.split_file(), split_to_json(split));
  write_file_atomic(layout.ingest_manifest(), manifest.dump(2) + "\n");
  log_info("ingest: " + std::to_string(data.patients.size()) + " patients, prediction cohort " +
           std::to_string(data.cohorts.prediction.size()) + ", pretrain set " + std::to_string(pretrain_set.size()));
}

void cmd_pretrain(const ExperimentConfig& config, const CommandOptions& options) {
  const auto layout = layout_for(config);
  const auto ctx = load_context(layout);
  pretrain::PretrainSetStats stats;
  const auto samples = pretrain::build_pretrain_set(ctx.data, ctx.split.train, &stats);
  nn::Rng rng(options.seed.value_or(config.pretrain_seed));
  const auto result = pretrain::train_pretrain(samples, ctx.data.lab_vocab, ctx.data.diag_vocab, config.pretrain, rng);
  pretrain::save_module(result.module, layout.lab_module());

  json epochs = json::array();
  for (const auto& e : result.history) {
    epochs.push_back({{"epoch", e.epoch},
                      {"lr", e.lr},
                      {"train_loss", e.train_loss},
                      {"holdout_loss", std::isfinite(e.holdout_loss) ? json(e.holdout_loss) : json(nullptr)}});
  }
  const json log{{"samples", samples.size()},
                 {"single_visit", stats.single_visit},
                 {"multi_visit", stats.multi_visit},
                 {"best_epoch", result.best_epoch},
                 {"epochs_run", result.history.size()},
                 {"lab_module_sha256", sha256_file(layout.lab_module())},
                 {"history", epochs}};
  write_file_atomic(layout.pretrain_log(), log.dump(1) + "\n");
  log_info("pretrain: " + std::to_string(samples.size()) + " samples, best epoch " +
           std::to_string(result.best_epoch) + ", wrote " + layout.lab_module().string());
}

void cmd_train(const ExperimentConfig& config, const CommandOptions& options) {
  const auto layout = layout_for(config);
  const auto ctx = load_context(layout);
  const auto seeds = run_seeds(config, options);
  for (const auto mode : selected_modes(options)) {
    std::shared_ptr<const pretrain::PretrainedLabModule> lab;
    std::string lab_sha;
    if (mode == fusion::Mode::mplite) lab = load_lab_module(layout, ctx.data, &lab_sha);
    for (const auto task : selected_tasks(config, options)) {
      const auto train = task_samples(ctx.data, ctx.split.train, task, config.sliding_window);
      const auto val = task_samples(ctx.data, ctx.split.val, task, false);
      parallel_for(seeds.size(), config.threads, [&](std::size_t i) {
        nn::Rng rng(seeds[i]);
        nn::Rng init = rng.split(0);
        auto model = fusion::make_fused_model(task, ctx.data.diag_vocab.size(), lab, config.downstream, init);
        auto result = fusion::train_downstream(std::move(model), train, val, config.downstream, rng);
        fusion::ExperimentMeta meta;
        meta.seed = seeds[i];
        meta.config = config.downstream;
        meta.lab_module_sha256 = lab_sha;
        meta.diag_vocab_fingerprint = ctx.data.diag_vocab.fingerprint();
        meta.lab_vocab_fingerprint = ctx.data.lab_vocab.fingerprint();
        meta.best_epoch = result.best_epoch;
        meta.selection_metric = result.selection_metric;
        meta.best_val_metric = result.best_val_metric;
        meta.history = std::move(result.history);
        fusion::save_experiment(result.model, meta, layout.experiment(mode, task, seeds[i]));
        log_info("train: " + std::string(fusion::to_string(mode)) + "-" + std::string(ehr::to_string(task)) +
                 " seed " + std::to_string(seeds[i]) + " best epoch " + std::to_string(meta.best_epoch) + " (" +
                 meta.selection_metric + " " + std::to_string(meta.best_val_metric) + ")");
      });
    }
  }
}

std::vector<metrics::MetricsReport> cmd_eval(const ExperimentConfig& config, const CommandOptions& options) {
  const auto layout = layout_for(config);
  const auto ctx = load_context(layout);
  const auto seeds = run_seeds(config, options);
  std::vector<metrics::MetricsReport> reports;
  for (const auto mode : selected_modes(options)) {
    for (const auto task : selected_tasks(config, options)) {
      if (!options.mode && !fs::exists(layout.train_dir(mode, task))) {
        log_warn("eval: no " + layout.train_dir(mode, task).string() + "; skipping");
        continue;
      }
      std::shared_ptr<const pretrain::PretrainedLabModule> lab;
      std::string lab_sha;
      if (mode == fusion::Mode::mplite) lab = load_lab_module(layout, ctx.data, &lab_sha);
      const auto test = task_samples(ctx.data, ctx.split.test, task, false);
      std::vector<metrics::RunMetrics> runs(seeds.size());
      parallel_for(seeds.size(), config.threads, [&](std::size_t i) {
        const auto path = layout.experiment(mode, task, seeds[i]);
        require(path, "train");
        const auto exp = fusion::load_experiment(path, lab, lab_sha);
        if (exp.model.task != task || exp.meta.diag_vocab_fingerprint != ctx.data.diag_vocab.fingerprint()) {
          throw ValidationError(path.string() + " was trained for a different task or vocabulary");
        }
        runs[i] = fusion::evaluate(exp.model, test, config.downstream.threshold, config.ks);
        runs[i].seed = seeds[i];
      });
      auto report = metrics::aggregate_runs(std::move(runs), fusion::metric_names(task, config.ks));
      report.mode = std::string(fusion::to_string(mode));
      report.task = std::string(ehr::to_string(task));
      write_file_atomic(layout.metrics_json(mode, task), metrics::report_to_json(report));
      write_file_atomic(layout.metrics_text(mode, task), metrics::format_report(report));
      reports.push_back(std::move(report));
    }
  }
  if (reports.empty()) throw ValidationError("eval: no trained experiments found; run 'train' first");
  return reports;
}

std::string cmd_report(const ExperimentConfig& config, const CommandOptions& options) {
  const auto layout = layout_for(config);
  std::vector<metrics::MetricsReport> reports;
  for (const auto task : selected_tasks(config, options)) {
    for (const auto mode : selected_modes(options)) {
      const auto path = layout.metrics_json(mode, task);
      if (fs::exists(path)) reports.push_back(metrics::report_from_json(read_file(path)));
    }
  }
  if (reports.empty()) throw ValidationError("report: no metrics under " + (layout.out_dir / "eval").string() +
                                             "; run 'eval' first");
  const std::string table = metrics::format_comparison(reports);
  write_file_atomic(layout.report_text(), table);
  write_file_atomic(layout.report_json(), metrics::comparison_to_json(reports));
  return table;
}

}  // namespace mplite::pipeline
