// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/pretrain/integrate.hpp"

#include <stdexcept>

namespace mplite::pretrain {

ehr::MultiHot integrate(std::span<const ehr::MultiHot> lab_vectors) {
  if (lab_vectors.empty()) throw std::invalid_argument("integrate: empty list of lab vectors");
  ehr::MultiHot out(lab_vectors.front().size());
  for (const auto& v : lab_vectors) {
    if (v.size() != out.size()) throw std::invalid_argument("integrate: lab vectors differ in length");
    out |= v;
  }
  return out;
}

}  // namespace mplite::pretrain
