// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/fusion/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mplite/common/error.hpp"
#include "mplite/common/log.hpp"
#include "mplite/metrics/metrics.hpp"
#include "mplite/nn/adam.hpp"

namespace mplite::fusion {
namespace {

std::vector<ehr::MultiHot> labels_of(std::span<const ehr::TaskSample> samples) {
  std::vector<ehr::MultiHot> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

std::vector<std::uint8_t> binary_labels(std::span<const ehr::TaskSample> samples) {
  std::vector<std::uint8_t> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label.test(0) ? 1 : 0);
  return out;
}

std::vector<double> first_column(const std::vector<std::vector<double>>& scores) {
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& s : scores) out.push_back(s.at(0));
  return out;
}

double validation_metric(const std::string& name, const std::vector<std::vector<double>>& scores,
                         std::span<const ehr::TaskSample> val, double val_loss, double threshold) {
  if (name == "w_f1") return metrics::weighted_f1(scores, labels_of(val), threshold);
  if (name == "auc") return metrics::roc_auc(first_column(scores), binary_labels(val));
  if (name == "neg_val_loss") return -val_loss;
  return std::nan("");
}

}  // namespace

std::string selection_metric_for(ehr::Task task, std::span<const ehr::TaskSample> val) {
  if (val.empty()) return "last_epoch";
  if (task == ehr::Task::dg) {
    for (const auto& s : val) {
      if (!s.label.none()) return "w_f1";
    }
    return "neg_val_loss";
  }
  std::size_t positives = 0;
  for (const auto& s : val) positives += s.label.test(0) ? 1 : 0;
  return positives > 0 && positives < val.size() ? "auc" : "neg_val_loss";
}

TrainResult train_downstream(FusedModel model, std::span<const ehr::TaskSample> train,
                             std::span<const ehr::TaskSample> val, const DownstreamConfig& config, nn::Rng& rng) {
  validate(config);
  check_model(model);
  if (train.empty()) throw ValidationError("train_downstream: no training samples");
  model.dropout_rate = config.dropout;

  const auto train_prepared = prepare_samples(model, train);
  const auto val_prepared = prepare_samples(model, val);
  nn::Rng order_rng = rng.split(2);
  nn::Rng dropout_rng = rng.split(3);

  TrainResult result;
  result.selection_metric = selection_metric_for(model.task, val);
  if (result.selection_metric == "neg_val_loss") {
    log_warn("train: validation labels are degenerate; selecting by validation loss");
  }

  auto params = trainable_parameters(model);
  auto grads = zero_gradients(model);
  auto grad_blocks = parameters(grads);
  auto adam = nn::AdamState::for_params(params);

  std::vector<std::size_t> order(train_prepared.size());
  std::iota(order.begin(), order.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  FusedModel best_model = model;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = nn::lr_schedule(epoch, config.epochs, config.lr);
    order_rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(stop - start);
      nn::set_zero(grad_blocks);
      for (std::size_t k = start; k < stop; ++k) {
        total += accumulate_gradients(model, train_prepared[order[k]], true, dropout_rng, scale, grads);
      }
      if (!std::isfinite(total)) {
        throw NumericError("downstream training diverged at epoch " + std::to_string(epoch) + ": non-finite loss");
      }
      try {
        nn::adam_update(params, grad_blocks, adam, lr);
      } catch (const NumericError& e) {
        throw NumericError("downstream training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
      }
    }

    EpochRecord record{epoch, lr, total / static_cast<double>(order.size()), std::nan(""), std::nan("")};
    if (!val_prepared.empty()) {
      const auto scores = predict_prepared(model, val_prepared);
      record.val_loss = mean_loss(model, val_prepared);
      record.val_metric = validation_metric(result.selection_metric, scores, val, record.val_loss, config.threshold);
    }
    result.history.push_back(record);
    log_debug("train epoch " + std::to_string(epoch) + " loss " + std::to_string(record.train_loss) + " val " +
              result.selection_metric + " " + std::to_string(record.val_metric));

    if (val_prepared.empty()) {
      result.best_epoch = epoch;
      continue;
    }
    if (record.val_metric > best) {
      best = record.val_metric;
      best_model = model;
      result.best_epoch = epoch;
    }
  }
  if (!val_prepared.empty()) model = std::move(best_model);
  result.best_val_metric = val_prepared.empty() ? std::nan("") : best;
  result.model = std::move(model);
  return result;
}

std::vector<std::string> metric_names(ehr::Task task, std::span<const std::size_t> ks) {
  if (task == ehr::Task::hf) return {"auc", "f1"};
  std::vector<std::string> names{"w_f1"};
  for (std::size_t k : ks) names.push_back("r_at_" + std::to_string(k));
  return names;
}

metrics::RunMetrics evaluate(const FusedModel& model, std::span<const ehr::TaskSample> samples, double threshold,
                             std::span<const std::size_t> ks) {
  if (samples.empty()) throw ValidationError("evaluate: no samples");
  const auto scores = predict_scores(model, samples);
  metrics::RunMetrics out;
  if (model.task == ehr::Task::dg) {
    const auto truth = labels_of(samples);
    out.values["w_f1"] = metrics::weighted_f1(scores, truth, threshold);
    for (std::size_t k : ks) {
      std::size_t skipped = 0;
      out.values["r_at_" + std::to_string(k)] = metrics::mean_recall_at_k(scores, truth, k, false, &skipped);
      if (skipped > 0) log_warn("evaluate: " + std::to_string(skipped) + " samples without positives skipped");
    }
  } else {
    const auto labels = binary_labels(samples);
    const auto col = first_column(scores);
    try {
      out.values["auc"] = metrics::roc_auc(col, labels);
    } catch (const ValidationError& e) {
      log_warn(std::string("evaluate: ") + e.what());
      out.values["auc"] = std::nan("");
    }
    out.values["f1"] = metrics::binary_f1(col, labels, threshold);
  }
  return out;
}

}  // namespace mplite::fusion
