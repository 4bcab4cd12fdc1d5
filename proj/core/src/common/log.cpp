// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/common/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string>

namespace mplite {

LogLevel log_level_from_env() {
  const char* raw = std::getenv("MPLITE_LOG");
  if (raw == nullptr) return LogLevel::info;
  const std::string value(raw);
  if (value == "error") return LogLevel::error;
  if (value == "debug") return LogLevel::debug;
  return LogLevel::info;
}

void set_log_level(LogLevel level) {
  static const bool installed = [] {
    auto logger = spdlog::stderr_color_mt("mplite");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)installed;
  switch (level) {
    case LogLevel::error: spdlog::set_level(spdlog::level::err); break;
    case LogLevel::info: spdlog::set_level(spdlog::level::info); break;
    case LogLevel::debug: spdlog::set_level(spdlog::level::debug); break;
  }
}

void log_error(std::string_view message) { spdlog::error("{}", message); }
void log_warn(std::string_view message) { spdlog::warn("{}", message); }
void log_info(std::string_view message) { spdlog::info("{}", message); }
void log_debug(std::string_view message) { spdlog::debug("{}", message); }

}  // namespace mplite
