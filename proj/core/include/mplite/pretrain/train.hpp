// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "mplite/ehr/vocabulary.hpp"
#include "mplite/nn/rng.hpp"
#include "mplite/pretrain/lab_module.hpp"

namespace mplite::pretrain {

struct PretrainEpoch {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;    // mean BCE over the training slice after the epoch
  double holdout_loss = 0.0;  // NaN when there is no holdout slice
};

struct PretrainResult {
  PretrainedLabModule module;  // frozen, best holdout weights
  std::vector<PretrainEpoch> history;
  int best_epoch = 0;
};

// Minibatch Adam on mean BCE with early stopping on a held-out slice.
// Deterministic in (samples, config, rng seed).
PretrainResult train_pretrain(std::span<const PretrainSample> samples, const ehr::Vocabulary& lab_vocab,
                              const ehr::Vocabulary& diag_vocab, const PretrainConfig& config, nn::Rng& rng);

// Mean BCE of the full network over the samples.
double pretrain_loss(const PretrainedLabModule& module, std::span<const PretrainSample> samples);

}  // namespace mplite::pretrain
