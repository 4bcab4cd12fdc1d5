// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mplite/nn/tensor.hpp"

namespace mplite::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment accumulators mirror the parameter blocks they were created for.
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;

  static AdamState for_params(std::span<const ParamBlock> params, AdamConfig config = {});
};

// One bias-corrected Adam step. `grads` must match `params` block by block.
// Throws NumericError naming the parameter if a gradient is not finite;
// parameters are left untouched in that case.
void adam_update(std::span<const ParamBlock> params, std::span<const ParamBlock> grads, AdamState& state, double lr);

}  // namespace mplite::nn
