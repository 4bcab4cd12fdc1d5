// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mplite/nn/rng.hpp"
#include "mplite/nn/tensor.hpp"

namespace mplite::nn {

struct DropoutForward {
  Vector output;
  Vector mask;  // 1 = kept, 0 = dropped
};

// Inverted dropout: y = x * mask / (1 - rate) while training, y = x otherwise.
// Throws std::invalid_argument unless 0 <= rate < 1.
DropoutForward dropout_forward(const Vector& x, double rate, Rng& rng, bool training);

Vector dropout_backward(const Vector& mask, double rate, const Vector& d_output);

}  // namespace mplite::nn
