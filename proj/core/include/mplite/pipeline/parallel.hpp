// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace mplite::pipeline {

// Runs fn(0..n-1) on up to `threads` workers. Every task runs to completion;
// afterwards the exception of the lowest failing index, if any, is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace mplite::pipeline
