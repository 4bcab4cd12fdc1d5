// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace mplite::nn {

enum class ScheduleKind { geometric, step };

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule(std::string_view text);

// Per-epoch learning rate from `start` at epoch 0 to `end` at the last epoch.
// geometric: start * (end / start)^(e / (total - 1)).
// step: same endpoints, `steps` equal drops in between.
struct LrSchedule {
  double start = 1e-2;
  double end = 1e-5;
  ScheduleKind kind = ScheduleKind::geometric;
  int steps = 3;
};

// Throws std::invalid_argument if total_epochs < 2 or epoch is out of range.
double lr_schedule(int epoch, int total_epochs, const LrSchedule& schedule = {});

}  // namespace mplite::nn
