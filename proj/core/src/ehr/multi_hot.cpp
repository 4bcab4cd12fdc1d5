// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/ehr/multi_hot.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace mplite::ehr {

MultiHot MultiHot::from_indices(std::size_t size, std::span<const std::size_t> indices) {
  MultiHot v(size);
  for (auto i : indices) v.set(i);
  return v;
}

std::size_t MultiHot::count() const noexcept {
  return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
}

std::vector<std::size_t> MultiHot::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

MultiHot& MultiHot::operator|=(const MultiHot& other) {
  if (other.size() != size()) {
    throw std::invalid_argument("MultiHot: length mismatch " + std::to_string(size()) + " vs " +
                                std::to_string(other.size()));
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

}  // namespace mplite::ehr
