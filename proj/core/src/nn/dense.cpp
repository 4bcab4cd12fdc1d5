// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/nn/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mplite/common/error.hpp"
#include "mplite/nn/init.hpp"

namespace mplite::nn {
namespace {

void check_input(const DenseLayer& layer, Eigen::Index n) {
  if (n != layer.weight.cols()) {
    throw std::invalid_argument("dense: input length " + std::to_string(n) + " does not match in-dim " +
                                std::to_string(layer.weight.cols()));
  }
}

Vector activate_all(Activation a, const Vector& pre) {
  switch (a) {
    case Activation::identity: return pre;
    case Activation::sigmoid: return pre.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
    case Activation::relu: return pre.cwiseMax(0.0);
    case Activation::tanh: return pre.array().tanh().matrix();
  }
  return pre;
}

// d act / d pre, expressed through cached values.
Vector derivative(Activation a, const DenseCache& cache) {
  switch (a) {
    case Activation::identity: return Vector::Ones(cache.pre_activation.size());
    case Activation::sigmoid: return (cache.output.array() * (1.0 - cache.output.array())).matrix();
    case Activation::relu: return cache.pre_activation.unaryExpr([](double x) { return x > 0.0 ? 1.0 : 0.0; });
    case Activation::tanh: return (1.0 - cache.output.array().square()).matrix();
  }
  return Vector::Ones(cache.pre_activation.size());
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
  }
  return "identity";
}

Activation parse_activation(std::string_view text) {
  if (text == "identity") return Activation::identity;
  if (text == "sigmoid") return Activation::sigmoid;
  if (text == "relu") return Activation::relu;
  if (text == "tanh") return Activation::tanh;
  throw ValidationError("unknown activation '" + std::string(text) + "'");
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::identity: return x;
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::tanh: return std::tanh(x);
  }
  return x;
}

DenseLayer make_dense(std::size_t in, std::size_t out, Activation activation, Rng& rng) {
  DenseLayer layer;
  layer.weight = Matrix(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  glorot_uniform(layer.weight, rng);
  layer.bias = Vector::Zero(static_cast<Eigen::Index>(out));
  layer.activation = activation;
  return layer;
}

DenseLayer zeros_like(const DenseLayer& layer) {
  return DenseLayer{Matrix::Zero(layer.weight.rows(), layer.weight.cols()), Vector::Zero(layer.bias.size()),
                    layer.activation};
}

DenseForward dense_forward(const DenseLayer& layer, const Vector& x) {
  check_input(layer, x.size());
  DenseForward f;
  f.cache.input = x;
  f.cache.pre_activation.noalias() = layer.weight * x;
  f.cache.pre_activation += layer.bias;
  f.cache.output = activate_all(layer.activation, f.cache.pre_activation);
  f.output = f.cache.output;
  return f;
}

Vector dense_apply(const DenseLayer& layer, const Vector& x) {
  check_input(layer, x.size());
  Vector pre = layer.bias;
  pre.noalias() += layer.weight * x;
  return activate_all(layer.activation, pre);
}

DenseGradients dense_backward(const DenseLayer& layer, const DenseCache& cache, const Vector& d_output) {
  DenseLayer grads = zeros_like(layer);
  DenseGradients g;
  g.d_input = dense_backward_accumulate(layer, cache, d_output, grads);
  g.d_weight = std::move(grads.weight);
  g.d_bias = std::move(grads.bias);
  return g;
}

Vector dense_backward_accumulate(const DenseLayer& layer, const DenseCache& cache, const Vector& d_output,
                                 DenseLayer& grads) {
  if (d_output.size() != layer.weight.rows() || cache.input.size() != layer.weight.cols()) {
    throw std::invalid_argument("dense backward: gradient or cache shape does not match the layer");
  }
  const Vector d_pre = d_output.cwiseProduct(derivative(layer.activation, cache));
  grads.weight.noalias() += d_pre * cache.input.transpose();
  grads.bias += d_pre;
  Vector d_input = layer.weight.transpose() * d_pre;
  return d_input;
}

std::vector<ParamBlock> parameters(DenseLayer& layer, std::string_view prefix) {
  const std::string p(prefix);
  return {{p + ".weight", flat(layer.weight)}, {p + ".bias", flat(layer.bias)}};
}

}  // namespace mplite::nn
