// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "mplite/nn/tensor.hpp"

namespace mplite::nn {

// |a - n| / max(|a|, |n|, 1e-8).
double relative_error(double analytic, double numeric);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::string worst_param;
  std::size_t worst_index = 0;
};

// Compares `analytic` against central differences of `loss` over `params`.
// `loss` must read the current parameter values; each coordinate is
// restored after probing. sample_coords == 0 checks every coordinate,
// otherwise that many are drawn uniformly with `seed`.
GradCheckResult grad_check(const std::function<double()>& loss, std::span<const ParamBlock> params,
                           std::span<const ParamBlock> analytic, double eps = 1e-5, std::size_t sample_coords = 0,
                           std::uint64_t seed = 0);

}  // namespace mplite::nn
