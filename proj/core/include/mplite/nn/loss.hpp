// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mplite/nn/tensor.hpp"

namespace mplite::nn {

inline constexpr double kProbabilityFloor = 1e-12;

struct LossResult {
  double loss = 0.0;
  Vector grad;  // d loss / d y_hat
};

// Mean element-wise binary cross-entropy with y_hat clamped to
// [1e-12, 1 - 1e-12]. The gradient is evaluated at the clamped point.
// Throws NumericError on NaN input.
LossResult bce_loss(const Vector& y_hat, const Vector& y);

}  // namespace mplite::nn
