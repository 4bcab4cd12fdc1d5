// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mplite/nn/rng.hpp"
#include "mplite/nn/tensor.hpp"

namespace mplite::nn {

// U(-a, a) with a = sqrt(6 / (fan_in + fan_out)); rows are fan_out.
void glorot_uniform(Matrix& weight, Rng& rng);

}  // namespace mplite::nn
