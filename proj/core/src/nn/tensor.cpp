// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/nn/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "mplite/common/hash.hpp"
#include "mplite/nn/init.hpp"

namespace mplite::nn {

Vector to_vector(const ehr::MultiHot& bits) {
  Vector v(static_cast<Eigen::Index>(bits.size()));
  const auto raw = bits.bits();
  for (std::size_t i = 0; i < raw.size(); ++i) v[static_cast<Eigen::Index>(i)] = raw[i] ? 1.0 : 0.0;
  return v;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

std::string checksum(std::span<const ParamBlock> blocks) {
  std::vector<double> all;
  for (const auto& b : blocks) all.insert(all.end(), b.values.begin(), b.values.end());
  return sha256_hex(std::span<const double>(all));
}

void set_zero(std::span<const ParamBlock> blocks) {
  for (const auto& b : blocks) std::fill(b.values.begin(), b.values.end(), 0.0);
}

void glorot_uniform(Matrix& weight, Rng& rng) {
  const double fan = static_cast<double>(weight.rows() + weight.cols());
  const double limit = fan > 0 ? std::sqrt(6.0 / fan) : 0.0;
  for (auto& w : flat(weight)) w = rng.uniform(-limit, limit);
}

}  // namespace mplite::nn
