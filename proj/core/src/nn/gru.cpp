// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/nn/gru.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mplite/nn/init.hpp"

namespace mplite::nn {
namespace {

Vector sigmoid(const Vector& a) {
  return a.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

void check_sequence(const GruLayer& layer, std::span<const Vector> inputs, const Vector& h0) {
  if (inputs.empty()) throw std::invalid_argument("gru: empty input sequence");
  if (h0.size() != static_cast<Eigen::Index>(layer.hidden_size())) {
    throw std::invalid_argument("gru: h0 length does not match hidden size");
  }
  for (const auto& x : inputs) {
    if (x.size() != static_cast<Eigen::Index>(layer.input_size())) {
      throw std::invalid_argument("gru: input length " + std::to_string(x.size()) + " does not match in-dim " +
                                  std::to_string(layer.input_size()));
    }
  }
}

GruStep step(const GruLayer& g, const Vector& x, const Vector& h_prev) {
  GruStep s;
  s.x = x;
  s.h_prev = h_prev;
  Vector a_z = g.b_z;
  a_z.noalias() += g.w_z * x;
  a_z.noalias() += g.u_z * h_prev;
  s.z = sigmoid(a_z);
  Vector a_r = g.b_r;
  a_r.noalias() += g.w_r * x;
  a_r.noalias() += g.u_r * h_prev;
  s.r = sigmoid(a_r);
  const Vector rh = s.r.cwiseProduct(h_prev);
  Vector a_n = g.b_n;
  a_n.noalias() += g.w_n * x;
  a_n.noalias() += g.u_n * rh;
  s.n = a_n.array().tanh().matrix();
  return s;
}

Vector next_hidden(const GruStep& s) {
  return (s.z.array() * s.h_prev.array() + (1.0 - s.z.array()) * s.n.array()).matrix();
}

}  // namespace

GruLayer make_gru(std::size_t input_size, std::size_t hidden_size, Rng& rng) {
  const auto in = static_cast<Eigen::Index>(input_size);
  const auto h = static_cast<Eigen::Index>(hidden_size);
  GruLayer g;
  for (Matrix* w : {&g.w_z, &g.w_r, &g.w_n}) {
    *w = Matrix(h, in);
    glorot_uniform(*w, rng);
  }
  for (Matrix* u : {&g.u_z, &g.u_r, &g.u_n}) {
    *u = Matrix(h, h);
    glorot_uniform(*u, rng);
  }
  g.b_z = Vector::Zero(h);
  g.b_r = Vector::Zero(h);
  g.b_n = Vector::Zero(h);
  return g;
}

GruLayer zeros_like(const GruLayer& layer) {
  GruLayer g;
  g.w_z = Matrix::Zero(layer.w_z.rows(), layer.w_z.cols());
  g.w_r = Matrix::Zero(layer.w_r.rows(), layer.w_r.cols());
  g.w_n = Matrix::Zero(layer.w_n.rows(), layer.w_n.cols());
  g.u_z = Matrix::Zero(layer.u_z.rows(), layer.u_z.cols());
  g.u_r = Matrix::Zero(layer.u_r.rows(), layer.u_r.cols());
  g.u_n = Matrix::Zero(layer.u_n.rows(), layer.u_n.cols());
  g.b_z = Vector::Zero(layer.b_z.size());
  g.b_r = Vector::Zero(layer.b_r.size());
  g.b_n = Vector::Zero(layer.b_n.size());
  return g;
}

GruForward gru_forward(const GruLayer& layer, std::span<const Vector> inputs, const Vector& h0) {
  check_sequence(layer, inputs, h0);
  GruForward f;
  f.cache.steps.reserve(inputs.size());
  f.hidden.reserve(inputs.size());
  Vector h = h0;
  for (const auto& x : inputs) {
    f.cache.steps.push_back(step(layer, x, h));
    h = next_hidden(f.cache.steps.back());
    f.hidden.push_back(h);
  }
  return f;
}

Vector gru_last_hidden(const GruLayer& layer, std::span<const Vector> inputs, const Vector& h0) {
  check_sequence(layer, inputs, h0);
  Vector h = h0;
  for (const auto& x : inputs) h = next_hidden(step(layer, x, h));
  return h;
}

namespace {

// Backpropagation through time; optional outputs are filled when non-null.
void backprop(const GruLayer& layer, const GruCache& cache, const Vector& d_h_last, GruLayer& grads,
              std::vector<Vector>* d_inputs, Vector* d_h0) {
  if (d_h_last.size() != static_cast<Eigen::Index>(layer.hidden_size())) {
    throw std::invalid_argument("gru backward: gradient length does not match hidden size");
  }
  if (d_inputs) d_inputs->assign(cache.steps.size(), Vector());
  Vector dh = d_h_last;
  for (std::size_t k = cache.steps.size(); k-- > 0;) {
    const GruStep& s = cache.steps[k];
    const Vector dz = dh.cwiseProduct(s.h_prev - s.n);
    const Vector dn = dh.cwiseProduct((1.0 - s.z.array()).matrix());
    Vector dh_prev = dh.cwiseProduct(s.z);

    const Vector da_n = dn.cwiseProduct((1.0 - s.n.array().square()).matrix());
    const Vector rh = s.r.cwiseProduct(s.h_prev);
    grads.w_n.noalias() += da_n * s.x.transpose();
    grads.u_n.noalias() += da_n * rh.transpose();
    grads.b_n += da_n;
    const Vector d_rh = layer.u_n.transpose() * da_n;
    const Vector dr = d_rh.cwiseProduct(s.h_prev);
    dh_prev += d_rh.cwiseProduct(s.r);

    const Vector da_z = dz.cwiseProduct((s.z.array() * (1.0 - s.z.array())).matrix());
    grads.w_z.noalias() += da_z * s.x.transpose();
    grads.u_z.noalias() += da_z * s.h_prev.transpose();
    grads.b_z += da_z;
    dh_prev.noalias() += layer.u_z.transpose() * da_z;

    const Vector da_r = dr.cwiseProduct((s.r.array() * (1.0 - s.r.array())).matrix());
    grads.w_r.noalias() += da_r * s.x.transpose();
    grads.u_r.noalias() += da_r * s.h_prev.transpose();
    grads.b_r += da_r;
    dh_prev.noalias() += layer.u_r.transpose() * da_r;

    if (d_inputs) {
      Vector dx = layer.w_z.transpose() * da_z;
      dx.noalias() += layer.w_r.transpose() * da_r;
      dx.noalias() += layer.w_n.transpose() * da_n;
      (*d_inputs)[k] = std::move(dx);
    }
    dh = std::move(dh_prev);
  }
  if (d_h0) *d_h0 = std::move(dh);
}

}  // namespace

void gru_backward_accumulate(const GruLayer& layer, const GruCache& cache, const Vector& d_h_last, GruLayer& grads) {
  backprop(layer, cache, d_h_last, grads, nullptr, nullptr);
}

GruGradients gru_backward(const GruLayer& layer, const GruCache& cache, const Vector& d_h_last) {
  GruGradients out;
  out.params = zeros_like(layer);
  backprop(layer, cache, d_h_last, out.params, &out.d_inputs, &out.d_h0);
  return out;
}

std::vector<ParamBlock> parameters(GruLayer& layer, std::string_view prefix) {
  const std::string p(prefix);
  return {{p + ".w_z", flat(layer.w_z)}, {p + ".w_r", flat(layer.w_r)}, {p + ".w_n", flat(layer.w_n)},
          {p + ".u_z", flat(layer.u_z)}, {p + ".u_r", flat(layer.u_r)}, {p + ".u_n", flat(layer.u_n)},
          {p + ".b_z", flat(layer.b_z)}, {p + ".b_r", flat(layer.b_r)}, {p + ".b_n", flat(layer.b_n)}};
}

}  // namespace mplite::nn
