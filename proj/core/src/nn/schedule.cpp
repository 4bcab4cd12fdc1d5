// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/nn/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mplite/common/error.hpp"

namespace mplite::nn {

std::string_view to_string(ScheduleKind kind) { return kind == ScheduleKind::geometric ? "geometric" : "step"; }

ScheduleKind parse_schedule(std::string_view text) {
  if (text == "geometric") return ScheduleKind::geometric;
  if (text == "step") return ScheduleKind::step;
  throw ValidationError("unknown learning-rate schedule '" + std::string(text) + "'");
}

double lr_schedule(int epoch, int total_epochs, const LrSchedule& s) {
  if (total_epochs < 2) throw std::invalid_argument("lr_schedule: total_epochs must be at least 2");
  if (epoch < 0 || epoch >= total_epochs) {
    throw std::invalid_argument("lr_schedule: epoch " + std::to_string(epoch) + " outside [0, " +
                                std::to_string(total_epochs) + ")");
  }
  if (epoch == 0) return s.start;
  if (epoch == total_epochs - 1) return s.end;
  const double ratio = s.end / s.start;
  double fraction = static_cast<double>(epoch) / static_cast<double>(total_epochs - 1);
  if (s.kind == ScheduleKind::step) {
    const int steps = std::max(1, s.steps);
    fraction = std::floor(fraction * steps) / steps;
  }
  return s.start * std::pow(ratio, fraction);
}

}  // namespace mplite::nn
