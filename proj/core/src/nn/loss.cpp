// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mplite/common/error.hpp"

namespace mplite::nn {

LossResult bce_loss(const Vector& y_hat, const Vector& y) {
  if (y_hat.size() != y.size() || y.size() == 0) {
    throw std::invalid_argument("bce: prediction and target lengths differ or are empty");
  }
  LossResult out;
  out.grad.resize(y.size());
  const double n = static_cast<double>(y.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::isnan(y_hat[i]) || std::isnan(y[i])) throw NumericError("bce: NaN input");
    const double p = std::clamp(y_hat[i], kProbabilityFloor, 1.0 - kProbabilityFloor);
    total -= y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p);
    out.grad[i] = (p - y[i]) / (p * (1.0 - p)) / n;
  }
  out.loss = total / n;
  return out;
}

}  // namespace mplite::nn
