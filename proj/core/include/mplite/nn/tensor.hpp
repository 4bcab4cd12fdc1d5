// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mplite/ehr/multi_hot.hpp"

namespace mplite::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Named view of one parameter tensor, flattened row-major.
struct ParamBlock {
  std::string name;
  std::span<double> values;
};

inline std::span<double> flat(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
inline std::span<double> flat(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
inline std::span<const double> flat(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
inline std::span<const double> flat(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Vector to_vector(const ehr::MultiHot& bits);
std::vector<double> to_std(const Vector& v);

bool all_finite(std::span<const double> values);

// SHA-256 over every block's values in order.
std::string checksum(std::span<const ParamBlock> blocks);

void set_zero(std::span<const ParamBlock> blocks);

}  // namespace mplite::nn
