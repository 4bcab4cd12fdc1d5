// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace mplite {

enum class LogLevel { error, info, debug };

// Reads MPLITE_LOG={error|info|debug}; unset means info.
LogLevel log_level_from_env();
void set_log_level(LogLevel level);

void log_error(std::string_view message);
void log_warn(std::string_view message);
void log_info(std::string_view message);
void log_debug(std::string_view message);

}  // namespace mplite
