// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

// Finite-difference probes on small random networks. Each returns the largest
// relative error between analytic and central-difference gradients.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mplite/ehr/types.hpp"
#include "mplite/ehr/vocabulary.hpp"
#include "mplite/fusion/fused_model.hpp"
#include "mplite/nn/dense.hpp"
#include "mplite/nn/grad_check.hpp"
#include "mplite/nn/gru.hpp"
#include "mplite/nn/loss.hpp"
#include "mplite/pretrain/lab_module.hpp"
#include "test_support.hpp"

namespace mplite::testing {

inline constexpr double kProbeEps = 1e-5;

inline ehr::Vocabulary numbered_vocab(ehr::VocabKind kind, std::size_t n, const std::string& prefix) {
  std::vector<std::string> codes;
  for (std::size_t i = 0; i < n; ++i) codes.push_back(prefix + std::to_string(10 + i));
  return ehr::Vocabulary::from_codes(kind, codes);
}

inline double dense_probe(std::uint64_t seed) {
  nn::Rng rng(seed);
  nn::DenseLayer layer{nn::Matrix(3, 4), nn::Vector(3), nn::Activation::sigmoid};
  randomize(layer.weight, rng);
  randomize(layer.bias, rng);
  const nn::Vector x = random_vector(rng, 4);
  const nn::Vector c = random_vector(rng, 3);
  const auto g = nn::dense_backward(layer, nn::dense_forward(layer, x).cache, c);
  nn::DenseLayer grads{g.d_weight, g.d_bias, layer.activation};
  return nn::grad_check([&] { return c.dot(nn::dense_forward(layer, x).output); }, nn::parameters(layer, "d"),
                        nn::parameters(grads, "d"), kProbeEps)
      .max_relative_error;
}

inline double gru_probe(std::uint64_t seed) {
  nn::Rng rng(seed);
  auto g = nn::make_gru(3, 5, rng);
  randomize(g.b_z, rng, 0.5);
  randomize(g.b_n, rng, 0.5);
  std::vector<nn::Vector> xs;
  for (int t = 0; t < 4; ++t) xs.push_back(random_vector(rng, 3));
  const nn::Vector h0 = nn::Vector::Zero(5);
  const nn::Vector c = random_vector(rng, 5);
  auto grads = nn::gru_backward(g, nn::gru_forward(g, xs, h0).cache, c);
  return nn::grad_check([&] { return c.dot(nn::gru_last_hidden(g, xs, h0)); }, nn::parameters(g, "g"),
                        nn::parameters(grads.params, "g"), kProbeEps)
      .max_relative_error;
}

inline double bce_probe(std::uint64_t seed) {
  nn::Rng rng(seed);
  nn::Vector y_hat(10), y(10);
  for (Eigen::Index i = 0; i < 10; ++i) {
    y_hat[i] = rng.uniform(0.05, 0.95);
    y[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  nn::Vector grad = nn::bce_loss(y_hat, y).grad;
  return nn::grad_check([&] { return nn::bce_loss(y_hat, y).loss; },
                        std::vector<nn::ParamBlock>{{"y_hat", nn::flat(y_hat)}},
                        std::vector<nn::ParamBlock>{{"y_hat", nn::flat(grad)}}, kProbeEps)
      .max_relative_error;
}

// Encoder -> decoder -> BCE, the proxy-task network.
inline double pretrain_probe(std::uint64_t seed) {
  nn::Rng rng(seed);
  const auto lab = numbered_vocab(ehr::VocabKind::lab, 7, "L");
  const auto diag = numbered_vocab(ehr::VocabKind::diagnosis, 6, "D");
  auto module = pretrain::make_lab_module(lab, diag, 5, nn::Activation::relu, rng);
  randomize(module.encoder.bias, rng, 0.3);
  nn::Vector x = nn::to_vector(random_multi_hot(rng, 7, 0.5));
  x[0] = 1.0;
  const nn::Vector y = nn::to_vector(random_multi_hot(rng, 6, 0.4));

  const auto enc = nn::dense_forward(module.encoder, x);
  const auto dec = nn::dense_forward(module.decoder, enc.output);
  const auto loss = nn::bce_loss(dec.output, y);
  pretrain::PretrainedLabModule grads;
  grads.encoder = nn::zeros_like(module.encoder);
  grads.decoder = nn::zeros_like(module.decoder);
  const nn::Vector d_h = nn::dense_backward_accumulate(module.decoder, dec.cache, loss.grad, grads.decoder);
  nn::dense_backward_accumulate(module.encoder, enc.cache, d_h, grads.encoder);
  return nn::grad_check([&] { return nn::bce_loss(pretrain::pretrain_forward(module, x).y_hat, y).loss; },
                        pretrain::parameters(module), pretrain::parameters(grads), kProbeEps)
      .max_relative_error;
}

struct FusedFixture {
  std::shared_ptr<pretrain::PretrainedLabModule> lab_module;
  fusion::FusedModel model;
  ehr::TaskSample sample;
};

// |D|=6, |L|=5, lab hidden 4, GRU hidden 3.
inline FusedFixture tiny_fused(ehr::Task task, bool with_lab, std::uint64_t seed, std::size_t projection = 0) {
  nn::Rng rng(seed);
  const auto lab = numbered_vocab(ehr::VocabKind::lab, 5, "L");
  const auto diag = numbered_vocab(ehr::VocabKind::diagnosis, 6, "D");
  FusedFixture f;
  if (with_lab) {
    f.lab_module = std::make_shared<pretrain::PretrainedLabModule>(
        pretrain::make_lab_module(lab, diag, 4, nn::Activation::relu, rng));
    randomize(f.lab_module->encoder.bias, rng, 0.3);
    f.lab_module->frozen = true;
  }
  fusion::DownstreamConfig config;
  config.gru_hidden = 3;
  config.projection_dim = projection;
  f.model = fusion::make_fused_model(task, 6, f.lab_module, config, rng);
  randomize(f.model.classifier.bias, rng, 0.3);
  f.sample.patient_id = "P";
  f.sample.task = task;
  for (int t = 0; t < 3; ++t) {
    auto d = random_multi_hot(rng, 6, 0.4);
    d.set(static_cast<std::size_t>(t));
    f.sample.history_diag.push_back(d);
    f.sample.history_lab.push_back(random_multi_hot(rng, 5, 0.5));
  }
  f.sample.label = task == ehr::Task::dg ? random_multi_hot(rng, 6, 0.4) : ehr::MultiHot(1);
  if (task == ehr::Task::hf) f.sample.label.set(0, true);
  return f;
}

// Gradient of the full fused network w.r.t. its trainable parameters. With
// `training`, the dropout mask is held fixed by replaying the same stream.
inline double fused_probe(FusedFixture& f, bool training, std::uint64_t dropout_seed = 99) {
  const auto prepared = fusion::prepare_sample(f.model, f.sample);
  const nn::Rng stream(dropout_seed);
  auto grads = fusion::zero_gradients(f.model);
  nn::Rng r0 = stream;
  fusion::accumulate_gradients(f.model, prepared, training, r0, 1.0, grads);
  auto loss = [&] {
    nn::Rng r = stream;
    auto scratch = fusion::zero_gradients(f.model);
    return fusion::accumulate_gradients(f.model, prepared, training, r, 1.0, scratch);
  };
  return nn::grad_check(loss, fusion::trainable_parameters(f.model), fusion::parameters(grads), kProbeEps)
      .max_relative_error;
}

}  // namespace mplite::testing
