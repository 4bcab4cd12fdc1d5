// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mplite/ehr/multi_hot.hpp"

namespace mplite::metrics {

// Fraction of the true codes found among the k highest scores. Equal scores
// are ranked by ascending index. With `capped` the denominator is
// min(k, |positives|). Throws ValidationError when truth has no positives.
double recall_at_k(std::span<const double> scores, const ehr::MultiHot& truth, std::size_t k, bool capped = false);

// Mean recall_at_k over samples; samples without positives are skipped and
// counted in `skipped`. Throws ValidationError if every sample is skipped.
double mean_recall_at_k(const std::vector<std::vector<double>>& scores, const std::vector<ehr::MultiHot>& truth,
                        std::size_t k, bool capped = false, std::size_t* skipped = nullptr);

// Per-label F1 over the dataset at `threshold`, weighted by label support.
// Throws ValidationError when the truth matrix has no positives.
double weighted_f1(const std::vector<std::vector<double>>& scores, const std::vector<ehr::MultiHot>& truth,
                   double threshold = 0.5);

// Mann-Whitney AUC with ties counted one half. Throws ValidationError unless
// both classes are present.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// 2TP / (2TP + FP + FN); 0 with a warning when there are no predicted and no
// actual positives.
double binary_f1(std::span<const double> scores, std::span<const std::uint8_t> labels, double threshold = 0.5);

}  // namespace mplite::metrics
