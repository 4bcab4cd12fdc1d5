// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "mplite/ehr/multi_hot.hpp"

namespace mplite::pretrain {

// Element-wise OR across a patient's per-visit lab vectors. Throws
// std::invalid_argument on an empty list or mismatched lengths.
ehr::MultiHot integrate(std::span<const ehr::MultiHot> lab_vectors);

}  // namespace mplite::pretrain
