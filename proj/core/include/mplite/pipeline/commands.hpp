// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mplite/ehr/types.hpp"
#include "mplite/fusion/fused_model.hpp"
#include "mplite/metrics/report.hpp"
#include "mplite/pipeline/config.hpp"

namespace mplite::pipeline {

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<ehr::Task> task;
  std::optional<fusion::Mode> mode;
};

// Artifact layout under out_dir.
struct Layout {
  std::filesystem::path out_dir;
  std::filesystem::path data_dir;

  std::filesystem::path ingest_manifest() const { return out_dir / "ingest" / "manifest.json"; }
  std::filesystem::path split_file() const { return out_dir / "ingest" / "split.json"; }
  std::filesystem::path lab_module() const { return out_dir / "pretrain" / "lab_module.ckpt.json"; }
  std::filesystem::path pretrain_log() const { return out_dir / "pretrain" / "history.json"; }
  std::filesystem::path train_dir(fusion::Mode mode, ehr::Task task) const;
  std::filesystem::path experiment(fusion::Mode mode, ehr::Task task, std::uint64_t seed) const;
  std::filesystem::path metrics_json(fusion::Mode mode, ehr::Task task) const;
  std::filesystem::path metrics_text(fusion::Mode mode, ehr::Task task) const;
  std::filesystem::path report_text() const { return out_dir / "report.txt"; }
  std::filesystem::path report_json() const { return out_dir / "report.json"; }
};

Layout layout_for(const ExperimentConfig& config);

// Each command reads only declared files of earlier stages and writes its own
// artifacts atomically. Reruns with identical inputs give identical bytes.
void cmd_synth(const ExperimentConfig& config, const CommandOptions& options = {});
void cmd_ingest(const ExperimentConfig& config, const CommandOptions& options = {});
void cmd_pretrain(const ExperimentConfig& config, const CommandOptions& options = {});
void cmd_train(const ExperimentConfig& config, const CommandOptions& options = {});
std::vector<metrics::MetricsReport> cmd_eval(const ExperimentConfig& config, const CommandOptions& options = {});
// Returns the comparison table that is also written to report.txt.
std::string cmd_report(const ExperimentConfig& config, const CommandOptions& options = {});

}  // namespace mplite::pipeline
