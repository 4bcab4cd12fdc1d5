// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/nn/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mplite/common/error.hpp"

namespace mplite::nn {

AdamState AdamState::for_params(std::span<const ParamBlock> params, AdamConfig config) {
  AdamState s;
  s.config = config;
  for (const auto& p : params) {
    s.first_moment.emplace_back(p.values.size(), 0.0);
    s.second_moment.emplace_back(p.values.size(), 0.0);
  }
  return s;
}

void adam_update(std::span<const ParamBlock> params, std::span<const ParamBlock> grads, AdamState& state, double lr) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw std::invalid_argument("adam: parameter, gradient and state block counts differ");
  }
  for (std::size_t b = 0; b < params.size(); ++b) {
    if (params[b].values.size() != grads[b].values.size() ||
        params[b].values.size() != state.first_moment[b].size()) {
      throw std::invalid_argument("adam: shape mismatch for " + params[b].name);
    }
    for (double g : grads[b].values) {
      if (!std::isfinite(g)) throw NumericError("adam: non-finite gradient for " + params[b].name);
    }
  }
  ++state.step;
  const auto& c = state.config;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto& m = state.first_moment[b];
    auto& v = state.second_moment[b];
    const auto g = grads[b].values;
    const auto w = params[b].values;
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      w[i] -= lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

}  // namespace mplite::nn
