// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/backbone/backbone.hpp"

#include <stdexcept>
#include <string>

#include "mplite/common/error.hpp"

namespace mplite::backbone {

BackboneModel make_backbone(std::size_t input_dim, std::size_t hidden, std::size_t projection_dim, nn::Rng& rng) {
  if (input_dim == 0 || hidden == 0) throw ValidationError("backbone: input and hidden sizes must be positive");
  BackboneModel m;
  m.gru = nn::make_gru(input_dim, hidden, rng);
  if (projection_dim > 0) m.projection = nn::make_dense(hidden, projection_dim, nn::Activation::identity, rng);
  return m;
}

BackboneModel zeros_like(const BackboneModel& model) {
  BackboneModel z;
  z.gru = nn::zeros_like(model.gru);
  if (model.projection) z.projection = nn::zeros_like(*model.projection);
  return z;
}

std::vector<nn::ParamBlock> parameters(BackboneModel& model, std::string_view prefix) {
  const std::string p(prefix);
  auto blocks = nn::parameters(model.gru, p + ".gru");
  if (model.projection) {
    auto proj = nn::parameters(*model.projection, p + ".projection");
    blocks.insert(blocks.end(), proj.begin(), proj.end());
  }
  return blocks;
}

BackboneForward backbone_forward_cached(const BackboneModel& model, std::span<const nn::Vector> history) {
  if (history.empty()) throw std::invalid_argument("backbone: empty history");
  for (const auto& x : history) {
    if (static_cast<std::size_t>(x.size()) != model.input_dim()) {
      throw std::invalid_argument("backbone: visit vector length " + std::to_string(x.size()) +
                                  " does not match input size " + std::to_string(model.input_dim()));
    }
  }
  BackboneForward out;
  auto gru = nn::gru_forward(model.gru, history, nn::Vector::Zero(static_cast<Eigen::Index>(model.hidden_dim())));
  out.cache.gru = std::move(gru.cache);
  if (model.projection) {
    auto proj = nn::dense_forward(*model.projection, gru.hidden.back());
    out.output = std::move(proj.output);
    out.cache.projection = std::move(proj.cache);
  } else {
    out.output = std::move(gru.hidden.back());
  }
  return out;
}

nn::Vector backbone_forward(const BackboneModel& model, std::span<const nn::Vector> history) {
  if (history.empty()) throw std::invalid_argument("backbone: empty history");
  nn::Vector h = nn::gru_last_hidden(model.gru, history,
                                     nn::Vector::Zero(static_cast<Eigen::Index>(model.hidden_dim())));
  return model.projection ? nn::dense_apply(*model.projection, h) : h;
}

nn::Vector backbone_forward(const BackboneModel& model, std::span<const ehr::MultiHot> history) {
  std::vector<nn::Vector> xs;
  xs.reserve(history.size());
  for (const auto& v : history) xs.push_back(nn::to_vector(v));
  return backbone_forward(model, xs);
}

void backbone_backward_accumulate(const BackboneModel& model, const BackboneCache& cache, const nn::Vector& d_output,
                                  BackboneModel& grads) {
  nn::Vector d_h = d_output;
  if (model.projection) {
    if (!cache.projection || !grads.projection) throw std::logic_error("backbone backward: missing projection state");
    d_h = nn::dense_backward_accumulate(*model.projection, *cache.projection, d_output, *grads.projection);
  }
  nn::gru_backward_accumulate(model.gru, cache.gru, d_h, grads.gru);
}

std::size_t task_output_dim(ehr::Task task, std::size_t n_diag) { return task == ehr::Task::dg ? n_diag : 1; }

nn::DenseLayer make_head(std::size_t in, ehr::Task task, std::size_t n_diag, nn::Rng& rng) {
  return nn::make_dense(in, task_output_dim(task, n_diag), nn::Activation::sigmoid, rng);
}

nn::Vector baseline_head(const nn::DenseLayer& head, const nn::Vector& o, ehr::Task task, std::size_t n_diag) {
  if (head.out_dim() != task_output_dim(task, n_diag)) {
    throw ValidationError("baseline head: output size " + std::to_string(head.out_dim()) + " does not fit task " +
                          std::string(ehr::to_string(task)));
  }
  return nn::dense_apply(head, o);
}

}  // namespace mplite::backbone
