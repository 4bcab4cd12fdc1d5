// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mplite/fusion/fused_model.hpp"
#include "mplite/fusion/train.hpp"
#include "mplite/pretrain/lab_module.hpp"

namespace mplite::fusion {

struct ExperimentMeta {
  std::uint64_t seed = 0;
  DownstreamConfig config;
  std::string lab_module_sha256;  // empty for the baseline
  std::string diag_vocab_fingerprint;
  std::string lab_vocab_fingerprint;
  int best_epoch = 0;
  std::string selection_metric;
  double best_val_metric = 0.0;
  std::vector<EpochRecord> history;
};

struct Experiment {
  FusedModel model;
  ExperimentMeta meta;
};

std::string experiment_to_json(const FusedModel& model, const ExperimentMeta& meta);
void save_experiment(const FusedModel& model, const ExperimentMeta& meta, const std::filesystem::path& path);

// For an mplite checkpoint `lab_module` must be the module whose checkpoint
// file hashes to `lab_module_sha256`; mismatches raise ValidationError.
Experiment load_experiment(const std::filesystem::path& path,
                           std::shared_ptr<const pretrain::PretrainedLabModule> lab_module = nullptr,
                           std::string_view lab_module_sha256 = {});

}  // namespace mplite::fusion
