// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "weights_io.hpp"

#include <string>

#include "mplite/common/base64.hpp"
#include "mplite/common/error.hpp"

namespace mplite::nn {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", encode_doubles(flat(m))}};
}

Matrix matrix_from_json(const json& j, const char* what) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = decode_doubles(j.at("data").get<std::string>());
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw DataError(std::string(what) + ": weight payload does not match its shape");
  }
  if (!all_finite(data)) throw DataError(std::string(what) + ": non-finite weights");
  Matrix m(rows, cols);
  std::copy(data.begin(), data.end(), m.data());
  return m;
}

json vector_to_json(const Vector& v) { return json{{"size", v.size()}, {"data", encode_doubles(flat(v))}}; }

Vector vector_from_json(const json& j, const char* what) {
  const auto size = j.at("size").get<Eigen::Index>();
  const auto data = decode_doubles(j.at("data").get<std::string>());
  if (size < 0 || static_cast<std::size_t>(size) != data.size()) {
    throw DataError(std::string(what) + ": weight payload does not match its shape");
  }
  if (!all_finite(data)) throw DataError(std::string(what) + ": non-finite weights");
  Vector v(size);
  std::copy(data.begin(), data.end(), v.data());
  return v;
}

json dense_to_json(const DenseLayer& layer) {
  return json{{"activation", std::string(to_string(layer.activation))},
              {"weight", matrix_to_json(layer.weight)},
              {"bias", vector_to_json(layer.bias)}};
}

DenseLayer dense_from_json(const json& j, const char* what) {
  DenseLayer layer;
  layer.activation = parse_activation(j.at("activation").get<std::string>());
  layer.weight = matrix_from_json(j.at("weight"), what);
  layer.bias = vector_from_json(j.at("bias"), what);
  if (layer.bias.size() != layer.weight.rows()) throw DataError(std::string(what) + ": bias/weight shape mismatch");
  return layer;
}

json gru_to_json(const GruLayer& g) {
  return json{{"w_z", matrix_to_json(g.w_z)}, {"w_r", matrix_to_json(g.w_r)}, {"w_n", matrix_to_json(g.w_n)},
              {"u_z", matrix_to_json(g.u_z)}, {"u_r", matrix_to_json(g.u_r)}, {"u_n", matrix_to_json(g.u_n)},
              {"b_z", vector_to_json(g.b_z)}, {"b_r", vector_to_json(g.b_r)}, {"b_n", vector_to_json(g.b_n)}};
}

GruLayer gru_from_json(const json& j) {
  GruLayer g;
  g.w_z = matrix_from_json(j.at("w_z"), "gru.w_z");
  g.w_r = matrix_from_json(j.at("w_r"), "gru.w_r");
  g.w_n = matrix_from_json(j.at("w_n"), "gru.w_n");
  g.u_z = matrix_from_json(j.at("u_z"), "gru.u_z");
  g.u_r = matrix_from_json(j.at("u_r"), "gru.u_r");
  g.u_n = matrix_from_json(j.at("u_n"), "gru.u_n");
  g.b_z = vector_from_json(j.at("b_z"), "gru.b_z");
  g.b_r = vector_from_json(j.at("b_r"), "gru.b_r");
  g.b_n = vector_from_json(j.at("b_n"), "gru.b_n");
  const auto h = g.w_z.rows();
  const auto in = g.w_z.cols();
  for (const Matrix* w : {&g.w_r, &g.w_n}) {
    if (w->rows() != h || w->cols() != in) throw DataError("gru: input weight shapes disagree");
  }
  for (const Matrix* u : {&g.u_z, &g.u_r, &g.u_n}) {
    if (u->rows() != h || u->cols() != h) throw DataError("gru: recurrent weight shapes disagree");
  }
  for (const Vector* b : {&g.b_z, &g.b_r, &g.b_n}) {
    if (b->size() != h) throw DataError("gru: bias shapes disagree");
  }
  return g;
}

}  // namespace mplite::nn
