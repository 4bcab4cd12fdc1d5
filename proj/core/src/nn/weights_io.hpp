// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

// Internal: JSON encoding of layer weights shared by the checkpoint formats.

#pragma once

#include "json.hpp"
#include "mplite/nn/dense.hpp"
#include "mplite/nn/gru.hpp"
#include "mplite/nn/tensor.hpp"

namespace mplite::nn {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const char* what);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, const char* what);

nlohmann::json dense_to_json(const DenseLayer& layer);
DenseLayer dense_from_json(const nlohmann::json& j, const char* what);

nlohmann::json gru_to_json(const GruLayer& layer);
GruLayer gru_from_json(const nlohmann::json& j);

}  // namespace mplite::nn
