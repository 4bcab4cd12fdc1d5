// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mplite/nn/rng.hpp"
#include "mplite/nn/tensor.hpp"

namespace mplite::nn {

// Gated recurrent unit:
//   z = sigmoid(Wz x + Uz h + bz)
//   r = sigmoid(Wr x + Ur h + br)
//   n = tanh(Wn x + Un (r * h) + bn)
//   h' = z * h + (1 - z) * n
// W* are hidden x input, U* are hidden x hidden.
struct GruLayer {
  Matrix w_z, w_r, w_n;
  Matrix u_z, u_r, u_n;
  Vector b_z, b_r, b_n;

  std::size_t input_size() const noexcept { return static_cast<std::size_t>(w_z.cols()); }
  std::size_t hidden_size() const noexcept { return static_cast<std::size_t>(w_z.rows()); }
};

GruLayer make_gru(std::size_t input_size, std::size_t hidden_size, Rng& rng);
GruLayer zeros_like(const GruLayer& layer);

struct GruStep {
  Vector x;
  Vector h_prev;
  Vector z, r, n;
};

struct GruCache {
  std::vector<GruStep> steps;
};

struct GruForward {
  std::vector<Vector> hidden;  // h_1..h_T
  GruCache cache;
};

GruForward gru_forward(const GruLayer& layer, std::span<const Vector> inputs, const Vector& h0);

// Last hidden state only, without a cache.
Vector gru_last_hidden(const GruLayer& layer, std::span<const Vector> inputs, const Vector& h0);

struct GruGradients {
  GruLayer params;  // same shapes as the layer
  std::vector<Vector> d_inputs;
  Vector d_h0;
};

// Backpropagation through time from a gradient on the final hidden state.
GruGradients gru_backward(const GruLayer& layer, const GruCache& cache, const Vector& d_h_last);

// As gru_backward, accumulating parameter gradients into `grads`.
void gru_backward_accumulate(const GruLayer& layer, const GruCache& cache, const Vector& d_h_last, GruLayer& grads);

std::vector<ParamBlock> parameters(GruLayer& layer, std::string_view prefix);

}  // namespace mplite::nn
