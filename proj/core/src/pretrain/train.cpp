// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/pretrain/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mplite/common/error.hpp"
#include "mplite/common/log.hpp"
#include "mplite/nn/adam.hpp"
#include "mplite/nn/loss.hpp"

namespace mplite::pretrain {
namespace {

struct Encoded {
  nn::Vector x;
  nn::Vector y;
};

std::vector<Encoded> encode_all(std::span<const PretrainSample> samples) {
  std::vector<Encoded> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({nn::to_vector(s.x_lab), nn::to_vector(s.y)});
  return out;
}

double mean_loss(const PretrainedLabModule& module, const std::vector<Encoded>& data,
                 const std::vector<std::size_t>& idx) {
  if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (std::size_t i : idx) total += nn::bce_loss(pretrain_forward(module, data[i].x).y_hat, data[i].y).loss;
  return total / static_cast<double>(idx.size());
}

}  // namespace

double pretrain_loss(const PretrainedLabModule& module, std::span<const PretrainSample> samples) {
  const auto data = encode_all(samples);
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  return mean_loss(module, data, idx);
}

PretrainResult train_pretrain(std::span<const PretrainSample> samples, const ehr::Vocabulary& lab_vocab,
                              const ehr::Vocabulary& diag_vocab, const PretrainConfig& config, nn::Rng& rng) {
  validate(config);
  if (samples.empty()) throw ValidationError("train_pretrain: no samples");
  for (const auto& s : samples) {
    if (s.x_lab.size() != lab_vocab.size() || s.y.size() != diag_vocab.size()) {
      throw ValidationError("train_pretrain: sample " + s.patient_id + " does not match the vocabularies");
    }
  }

  nn::Rng init_rng = rng.split(0);
  nn::Rng holdout_rng = rng.split(1);
  nn::Rng order_rng = rng.split(2);

  PretrainResult result;
  result.module = make_lab_module(lab_vocab, diag_vocab, config.hidden, config.encoder_activation, init_rng);
  auto& module = result.module;
  module.config = config;
  module.seed = rng.seed();

  const auto data = encode_all(samples);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  holdout_rng.shuffle(order);
  const auto n_holdout =
      static_cast<std::size_t>(std::llround(config.holdout_fraction * static_cast<double>(data.size())));
  std::vector<std::size_t> holdout(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_holdout));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_holdout), order.end());
  if (train.empty()) throw ValidationError("train_pretrain: holdout leaves no training samples");

  auto params = parameters(module);
  PretrainedLabModule grads;
  grads.encoder = nn::zeros_like(module.encoder);
  grads.decoder = nn::zeros_like(module.decoder);
  auto grad_blocks = parameters(grads);
  auto adam = nn::AdamState::for_params(params);

  double best_loss = std::numeric_limits<double>::infinity();
  PretrainedLabModule best = module;
  int since_best = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = nn::lr_schedule(epoch, config.epochs, config.lr);
    order_rng.shuffle(train);
    for (std::size_t start = 0; start < train.size(); start += config.batch_size) {
      const std::size_t stop = std::min(train.size(), start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(stop - start);
      nn::set_zero(grad_blocks);
      for (std::size_t k = start; k < stop; ++k) {
        const auto& s = data[train[k]];
        const auto enc = nn::dense_forward(module.encoder, s.x);
        const auto dec = nn::dense_forward(module.decoder, enc.output);
        const auto loss = nn::bce_loss(dec.output, s.y);
        if (!std::isfinite(loss.loss)) {
          throw NumericError("pretrain diverged at epoch " + std::to_string(epoch) + ": non-finite loss");
        }
        const nn::Vector d_h = nn::dense_backward_accumulate(module.decoder, dec.cache, loss.grad * scale,
                                                             grads.decoder);
        nn::dense_backward_accumulate(module.encoder, enc.cache, d_h, grads.encoder);
      }
      try {
        nn::adam_update(params, grad_blocks, adam, lr);
      } catch (const NumericError& e) {
        throw NumericError("pretrain diverged at epoch " + std::to_string(epoch) + ": " + e.what());
      }
    }

    PretrainEpoch record{epoch, lr, mean_loss(module, data, train), mean_loss(module, data, holdout)};
    if (!std::isfinite(record.train_loss)) {
      throw NumericError("pretrain diverged at epoch " + std::to_string(epoch) + ": non-finite loss");
    }
    result.history.push_back(record);
    log_debug("pretrain epoch " + std::to_string(epoch) + " train " + std::to_string(record.train_loss) +
              " holdout " + std::to_string(record.holdout_loss));

    if (holdout.empty()) {
      result.best_epoch = epoch;
      continue;
    }
    if (record.holdout_loss < best_loss) {
      best_loss = record.holdout_loss;
      best = module;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      log_info("pretrain: early stop at epoch " + std::to_string(epoch) + ", best epoch " +
               std::to_string(result.best_epoch));
      break;
    }
  }
  if (!holdout.empty()) {
    best.config = module.config;
    best.seed = module.seed;
    module = std::move(best);
  }
  module.frozen = true;
  return result;
}

}  // namespace mplite::pretrain
