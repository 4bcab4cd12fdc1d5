// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mplite/ehr/types.hpp"

namespace mplite::ehr {

enum class VocabKind { diagnosis, lab };

std::string_view to_string(VocabKind kind);

// Dense code <-> index map. Indices follow lexicographic code order.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Duplicates are collapsed.
  static Vocabulary from_codes(VocabKind kind, std::vector<std::string> codes);

  VocabKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return codes_.size(); }
  const std::vector<std::string>& codes() const noexcept { return codes_; }

  std::optional<std::size_t> index_of(std::string_view code) const;
  const std::string& code_at(std::size_t index) const { return codes_.at(index); }

  // Order-sensitive SHA-256 over the kind tag and code list.
  std::string fingerprint() const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  VocabKind kind_ = VocabKind::diagnosis;
  std::vector<std::string> codes_;
};

Vocabulary build_vocabulary(std::span<const DiagnosisEvent> events);
Vocabulary build_vocabulary(std::span<const LabEvent> events);

// Vocabulary sizes of the full MIMIC-III extraction.
inline constexpr std::size_t kMimic3LabItems = 697;
inline constexpr std::size_t kMimic3DiagnosisCodes = 4880;

// Returns false and logs a warning when the size differs from `expected`.
bool check_vocabulary_size(const Vocabulary& vocab, std::size_t expected);

}  // namespace mplite::ehr
