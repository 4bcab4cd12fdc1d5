// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mplite/ehr/multi_hot.hpp"
#include "mplite/ehr/types.hpp"
#include "mplite/nn/dense.hpp"
#include "mplite/nn/gru.hpp"
#include "mplite/nn/rng.hpp"
#include "mplite/nn/tensor.hpp"

namespace mplite::backbone {

// GRU over multi-hot diagnosis vectors with an optional linear projection of
// the last hidden state.
struct BackboneModel {
  nn::GruLayer gru;
  std::optional<nn::DenseLayer> projection;

  std::size_t input_dim() const noexcept { return gru.input_size(); }
  std::size_t hidden_dim() const noexcept { return gru.hidden_size(); }
  std::size_t output_dim() const noexcept { return projection ? projection->out_dim() : gru.hidden_size(); }
};

// projection_dim == 0 means no projection.
BackboneModel make_backbone(std::size_t input_dim, std::size_t hidden, std::size_t projection_dim, nn::Rng& rng);
BackboneModel zeros_like(const BackboneModel& model);
std::vector<nn::ParamBlock> parameters(BackboneModel& model, std::string_view prefix = "backbone");

struct BackboneCache {
  nn::GruCache gru;
  std::optional<nn::DenseCache> projection;
};

struct BackboneForward {
  nn::Vector output;
  BackboneCache cache;
};

BackboneForward backbone_forward_cached(const BackboneModel& model, std::span<const nn::Vector> history);
nn::Vector backbone_forward(const BackboneModel& model, std::span<const nn::Vector> history);
nn::Vector backbone_forward(const BackboneModel& model, std::span<const ehr::MultiHot> history);

// Accumulates parameter gradients into `grads`.
void backbone_backward_accumulate(const BackboneModel& model, const BackboneCache& cache, const nn::Vector& d_output,
                                  BackboneModel& grads);

std::size_t task_output_dim(ehr::Task task, std::size_t n_diag);

// Sigmoid classifier from a representation of size `in` to the task output.
nn::DenseLayer make_head(std::size_t in, ehr::Task task, std::size_t n_diag, nn::Rng& rng);

// Baseline prediction: |D| probabilities for DG, one for HF.
nn::Vector baseline_head(const nn::DenseLayer& head, const nn::Vector& o, ehr::Task task, std::size_t n_diag);

}  // namespace mplite::backbone
