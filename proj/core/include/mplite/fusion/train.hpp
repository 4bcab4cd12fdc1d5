// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "mplite/ehr/types.hpp"
#include "mplite/fusion/fused_model.hpp"
#include "mplite/metrics/report.hpp"
#include "mplite/nn/rng.hpp"

namespace mplite::fusion {

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;  // mean minibatch loss during the epoch
  double val_loss = 0.0;    // NaN without validation samples
  double val_metric = 0.0;  // selection metric; NaN without validation samples
};

struct TrainResult {
  FusedModel model;  // weights of the best validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  std::string selection_metric;  // "w_f1", "auc", "neg_val_loss" or "last_epoch"
  double best_val_metric = 0.0;
};

// Name of the validation metric used for model selection on these samples.
std::string selection_metric_for(ehr::Task task, std::span<const ehr::TaskSample> val);

// Adam over backbone and classifier weights only.
TrainResult train_downstream(FusedModel model, std::span<const ehr::TaskSample> train,
                             std::span<const ehr::TaskSample> val, const DownstreamConfig& config, nn::Rng& rng);

// Task metrics for a set of samples: w_f1, r_at_k... for DG; auc, f1 for HF.
metrics::RunMetrics evaluate(const FusedModel& model, std::span<const ehr::TaskSample> samples, double threshold,
                             std::span<const std::size_t> ks);
std::vector<std::string> metric_names(ehr::Task task, std::span<const std::size_t> ks);

}  // namespace mplite::fusion
