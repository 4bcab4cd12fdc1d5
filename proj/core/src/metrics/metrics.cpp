// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/metrics/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mplite/common/error.hpp"
#include "mplite/common/log.hpp"

namespace mplite::metrics {
namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

double recall_at_k(std::span<const double> scores, const ehr::MultiHot& truth, std::size_t k, bool capped) {
  check_lengths(scores.size(), truth.size(), "recall_at_k");
  if (k == 0) throw std::invalid_argument("recall_at_k: k must be at least 1");
  const std::size_t positives = truth.count();
  if (positives == 0) throw ValidationError("recall_at_k: sample has no positive labels");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });
  std::size_t hits = 0;
  for (std::size_t i = 0; i < top; ++i) hits += truth.test(order[i]) ? 1 : 0;
  const std::size_t denom = capped ? std::min(k, positives) : positives;
  return static_cast<double>(hits) / static_cast<double>(denom);
}

double mean_recall_at_k(const std::vector<std::vector<double>>& scores, const std::vector<ehr::MultiHot>& truth,
                        std::size_t k, bool capped, std::size_t* skipped) {
  check_lengths(scores.size(), truth.size(), "mean_recall_at_k");
  double total = 0.0;
  std::size_t used = 0;
  std::size_t skip = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (truth[i].none()) {
      ++skip;
      continue;
    }
    total += recall_at_k(scores[i], truth[i], k, capped);
    ++used;
  }
  if (skipped) *skipped = skip;
  if (used == 0) throw ValidationError("mean_recall_at_k: no sample has a positive label");
  return total / static_cast<double>(used);
}

double weighted_f1(const std::vector<std::vector<double>>& scores, const std::vector<ehr::MultiHot>& truth,
                   double threshold) {
  check_lengths(scores.size(), truth.size(), "weighted_f1");
  if (scores.empty()) throw ValidationError("weighted_f1: no samples");
  const std::size_t n_labels = truth.front().size();
  std::vector<std::size_t> tp(n_labels, 0), fp(n_labels, 0), fn(n_labels, 0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    check_lengths(scores[i].size(), n_labels, "weighted_f1");
    check_lengths(truth[i].size(), n_labels, "weighted_f1");
    for (std::size_t j = 0; j < n_labels; ++j) {
      const bool pred = scores[i][j] >= threshold;
      const bool actual = truth[i].test(j);
      if (pred && actual) ++tp[j];
      else if (pred) ++fp[j];
      else if (actual) ++fn[j];
    }
  }
  double weighted = 0.0;
  std::size_t support = 0;
  for (std::size_t j = 0; j < n_labels; ++j) {
    const std::size_t s = tp[j] + fn[j];
    if (s == 0) continue;
    const double f1 = 2.0 * static_cast<double>(tp[j]) / static_cast<double>(2 * tp[j] + fp[j] + fn[j]);
    weighted += f1 * static_cast<double>(s);
    support += s;
  }
  if (support == 0) throw ValidationError("weighted_f1: truth matrix has no positive labels");
  return weighted / static_cast<double>(support);
}

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_lengths(scores.size(), labels.size(), "roc_auc");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of positive ranks, with tied groups sharing their average rank.
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]]) {
        rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw ValidationError("roc_auc: undefined without both positive and negative labels");
  const double pos = static_cast<double>(n_pos);
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * static_cast<double>(n_neg));
}

double binary_f1(std::span<const double> scores, std::span<const std::uint8_t> labels, double threshold) {
  check_lengths(scores.size(), labels.size(), "binary_f1");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    if (pred && labels[i]) ++tp;
    else if (pred) ++fp;
    else if (labels[i]) ++fn;
  }
  if (tp + fp + fn == 0) {
    log_warn("binary_f1: no predicted and no actual positives; reporting 0");
    return 0.0;
  }
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace mplite::metrics
