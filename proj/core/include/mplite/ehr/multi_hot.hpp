// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mplite::ehr {

// Fixed-length presence vector over a vocabulary; each element is 0 or 1.
class MultiHot {
 public:
  MultiHot() = default;
  explicit MultiHot(std::size_t size) : bits_(size, 0) {}

  static MultiHot from_indices(std::size_t size, std::span<const std::size_t> indices);

  std::size_t size() const noexcept { return bits_.size(); }
  bool test(std::size_t i) const { return bits_.at(i) != 0; }
  void set(std::size_t i, bool on = true) { bits_.at(i) = on ? 1 : 0; }

  std::size_t count() const noexcept;
  bool none() const noexcept { return count() == 0; }
  std::vector<std::size_t> indices() const;
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  // Element-wise OR in place; sizes must match.
  MultiHot& operator|=(const MultiHot& other);

  friend bool operator==(const MultiHot&, const MultiHot&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace mplite::ehr
