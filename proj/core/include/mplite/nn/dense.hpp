// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mplite/nn/rng.hpp"
#include "mplite/nn/tensor.hpp"

namespace mplite::nn {

enum class Activation { identity, sigmoid, relu, tanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

double activate(Activation a, double x);

// y = act(W x + b), W is out x in.
struct DenseLayer {
  Matrix weight;
  Vector bias;
  Activation activation = Activation::identity;

  std::size_t in_dim() const noexcept { return static_cast<std::size_t>(weight.cols()); }
  std::size_t out_dim() const noexcept { return static_cast<std::size_t>(weight.rows()); }
};

// Glorot-uniform weights, zero bias.
DenseLayer make_dense(std::size_t in, std::size_t out, Activation activation, Rng& rng);
DenseLayer zeros_like(const DenseLayer& layer);

struct DenseCache {
  Vector input;
  Vector pre_activation;
  Vector output;
};

struct DenseForward {
  Vector output;
  DenseCache cache;
};

DenseForward dense_forward(const DenseLayer& layer, const Vector& x);

// Forward without a cache.
Vector dense_apply(const DenseLayer& layer, const Vector& x);

struct DenseGradients {
  Vector d_input;
  Matrix d_weight;
  Vector d_bias;
};

DenseGradients dense_backward(const DenseLayer& layer, const DenseCache& cache, const Vector& d_output);

// Accumulates parameter gradients into `grads` (same shapes as the layer)
// and returns d_input.
Vector dense_backward_accumulate(const DenseLayer& layer, const DenseCache& cache, const Vector& d_output,
                                 DenseLayer& grads);

std::vector<ParamBlock> parameters(DenseLayer& layer, std::string_view prefix);

}  // namespace mplite::nn
