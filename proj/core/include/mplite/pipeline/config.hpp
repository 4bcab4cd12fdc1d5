// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "mplite/ehr/cohort.hpp"
#include "mplite/ehr/synth.hpp"
#include "mplite/ehr/types.hpp"
#include "mplite/fusion/fused_model.hpp"
#include "mplite/pretrain/lab_module.hpp"

namespace mplite::pipeline {

inline constexpr int kConfigVersion = 1;

// One JSON file describes a whole experiment. Relative paths resolve against
// the working directory.
struct ExperimentConfig {
  int version = kConfigVersion;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> data_dir;  // defaults to out_dir/data

  std::optional<ehr::GenConfig> synth;
  std::uint64_t synth_seed = 1;

  ehr::SplitRatios split;
  std::uint64_t split_seed = 0;

  pretrain::PretrainConfig pretrain;
  std::uint64_t pretrain_seed = 0;

  fusion::DownstreamConfig downstream;
  bool sliding_window = false;  // train on every prefix of a patient's history

  std::vector<ehr::Task> tasks{ehr::Task::dg, ehr::Task::hf};
  std::size_t n_runs = 10;
  std::vector<std::uint64_t> seeds;  // length n_runs
  std::vector<std::size_t> ks{10, 20};
  std::size_t threads = 1;

  std::filesystem::path resolved_data_dir() const { return data_dir ? *data_dir : out_dir / "data"; }
};

// Throws ValidationError with the offending key.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& config);

// Seeds seed, seed+1, ... for the configured number of runs.
std::vector<std::uint64_t> consecutive_seeds(std::uint64_t first, std::size_t n);

}  // namespace mplite::pipeline
