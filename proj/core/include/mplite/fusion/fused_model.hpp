// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "mplite/backbone/backbone.hpp"
#include "mplite/ehr/multi_hot.hpp"
#include "mplite/ehr/types.hpp"
#include "mplite/nn/dense.hpp"
#include "mplite/nn/rng.hpp"
#include "mplite/nn/schedule.hpp"
#include "mplite/nn/tensor.hpp"
#include "mplite/pretrain/lab_module.hpp"

namespace mplite::fusion {

enum class Mode { baseline, mplite };
std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct DownstreamConfig {
  std::size_t gru_hidden = 128;
  std::size_t projection_dim = 0;  // 0 keeps the raw GRU state
  double dropout = 0.4;
  std::size_t batch_size = 64;
  int epochs = 100;
  nn::LrSchedule lr;
  double threshold = 0.5;  // decision threshold for w-F1 / F1
};

void validate(const DownstreamConfig& config);

// Backbone representation concatenated with the frozen lab encoding, then a
// sigmoid classifier. Without a lab module the classifier sees the backbone
// output alone (baseline).
struct FusedModel {
  ehr::Task task = ehr::Task::dg;
  backbone::BackboneModel backbone;
  std::shared_ptr<const pretrain::PretrainedLabModule> lab_module;
  nn::DenseLayer classifier;
  double dropout_rate = 0.4;

  Mode mode() const noexcept { return lab_module ? Mode::mplite : Mode::baseline; }
  std::size_t n_diag() const noexcept { return backbone.input_dim(); }
  std::size_t lab_hidden() const noexcept { return lab_module ? lab_module->hidden_size() : 0; }
  std::size_t task_dim() const noexcept { return classifier.out_dim(); }
};

// Throws std::logic_error if the lab module is not frozen.
FusedModel make_fused_model(ehr::Task task, std::size_t n_diag,
                            std::shared_ptr<const pretrain::PretrainedLabModule> lab_module,
                            const DownstreamConfig& config, nn::Rng& rng);

// Checks dimensions and the frozen flag; throws ValidationError.
void check_model(const FusedModel& model);

// Trainable blocks only: backbone then classifier. The lab module is excluded.
std::vector<nn::ParamBlock> trainable_parameters(FusedModel& model);

// Sample with the lab encoding precomputed; the lab module is frozen so the
// encoding is fixed for the lifetime of the model.
struct PreparedSample {
  std::vector<nn::Vector> history_diag;
  nn::Vector h_lab;  // empty for the baseline
  nn::Vector label;
};

PreparedSample prepare_sample(const FusedModel& model, const ehr::TaskSample& sample);
std::vector<PreparedSample> prepare_samples(const FusedModel& model, std::span<const ehr::TaskSample> samples);

nn::Vector fuse_forward(const FusedModel& model, const PreparedSample& sample, bool training, nn::Rng& rng);
nn::Vector fuse_forward(const FusedModel& model, std::span<const ehr::MultiHot> history_diag,
                        std::span<const ehr::MultiHot> history_lab, bool training, nn::Rng& rng);

// The concatenated representation o' = (o, h_lab) before dropout.
nn::Vector fused_representation(const FusedModel& model, const PreparedSample& sample);

struct FusedGradients {
  backbone::BackboneModel backbone;
  nn::DenseLayer classifier;
};

FusedGradients zero_gradients(const FusedModel& model);
std::vector<nn::ParamBlock> parameters(FusedGradients& grads);

// Forward and backward for one sample. Adds scale * dLoss/dtheta for the
// trainable parameters to `grads` and returns the unscaled BCE loss.
double accumulate_gradients(const FusedModel& model, const PreparedSample& sample, bool training, nn::Rng& rng,
                            double scale, FusedGradients& grads);

// Mean BCE without dropout.
double mean_loss(const FusedModel& model, std::span<const PreparedSample> samples);

// Inference scores: |D| probabilities for DG, one for HF.
std::vector<double> predict_scores(const FusedModel& model, const ehr::TaskSample& sample);
std::vector<std::vector<double>> predict_scores(const FusedModel& model, std::span<const ehr::TaskSample> samples);
std::vector<std::vector<double>> predict_prepared(const FusedModel& model, std::span<const PreparedSample> samples);

}  // namespace mplite::fusion
