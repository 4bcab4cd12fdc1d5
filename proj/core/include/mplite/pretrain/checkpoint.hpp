// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mplite/ehr/vocabulary.hpp"
#include "mplite/pretrain/lab_module.hpp"

namespace mplite::pretrain {

inline constexpr std::string_view kCheckpointFormat = "mplite-ckpt-v1";

std::string module_to_json(const PretrainedLabModule& module);
// Throws DataError on malformed input; never returns a partial module.
PretrainedLabModule module_from_json(std::string_view text);

// Requires a frozen module. The write is atomic.
void save_module(const PretrainedLabModule& module, const std::filesystem::path& path);
PretrainedLabModule load_module(const std::filesystem::path& path);
PretrainedLabModule load_module(const std::filesystem::path& path, const ehr::Vocabulary& lab_vocab,
                                const ehr::Vocabulary& diag_vocab);

}  // namespace mplite::pretrain
