// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mplite/nn/rng.hpp"

namespace mplite::nn {

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult grad_check(const std::function<double()>& loss, std::span<const ParamBlock> params,
                           std::span<const ParamBlock> analytic, double eps, std::size_t sample_coords,
                           std::uint64_t seed) {
  if (params.size() != analytic.size()) throw std::invalid_argument("grad_check: block count mismatch");
  std::size_t total = 0;
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].values.size() != analytic[b].values.size()) {
      throw std::invalid_argument("grad_check: shape mismatch for " + params[b].name);
    }
    total += params[b].values.size();
  }

  std::vector<std::size_t> coords;
  if (sample_coords == 0 || sample_coords >= total) {
    coords.resize(total);
    for (std::size_t i = 0; i < total; ++i) coords[i] = i;
  } else {
    Rng rng(seed);
    for (std::size_t i = 0; i < sample_coords; ++i) coords.push_back(rng.below(total));
  }

  GradCheckResult result;
  for (std::size_t flat_index : coords) {
    std::size_t b = 0;
    std::size_t i = flat_index;
    while (i >= params[b].values.size()) {
      i -= params[b].values.size();
      ++b;
    }
    double& w = params[b].values[i];
    const double saved = w;
    w = saved + eps;
    const double up = loss();
    w = saved - eps;
    const double down = loss();
    w = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double err = relative_error(analytic[b].values[i], numeric);
    ++result.checked;
    if (result.checked == 1 || err > result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_param = params[b].name;
      result.worst_index = i;
    }
  }
  return result;
}

}  // namespace mplite::nn
