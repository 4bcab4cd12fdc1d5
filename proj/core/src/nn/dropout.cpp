// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/nn/dropout.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mplite::nn {

DropoutForward dropout_forward(const Vector& x, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout: rate must be in [0, 1), got " + std::to_string(rate));
  }
  DropoutForward f;
  f.mask = Vector::Ones(x.size());
  if (!training || rate == 0.0) {
    f.output = x;
    return f;
  }
  const double keep = 1.0 - rate;
  for (Eigen::Index i = 0; i < x.size(); ++i) f.mask[i] = rng.bernoulli(keep) ? 1.0 : 0.0;
  f.output = x.cwiseProduct(f.mask) / keep;
  return f;
}

Vector dropout_backward(const Vector& mask, double rate, const Vector& d_output) {
  return d_output.cwiseProduct(mask) / (1.0 - rate);
}

}  // namespace mplite::nn
