// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/ehr/vocabulary.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

#include "mplite/common/hash.hpp"

namespace mplite::ehr {

std::string_view to_string(VocabKind kind) {
  return kind == VocabKind::diagnosis ? "diagnosis" : "lab";
}

Vocabulary Vocabulary::from_codes(VocabKind kind, std::vector<std::string> codes) {
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  Vocabulary v;
  v.kind_ = kind;
  v.codes_ = std::move(codes);
  return v;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view code) const {
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::string Vocabulary::fingerprint() const {
  std::string buf(to_string(kind_));
  buf += '\n';
  for (const auto& c : codes_) {
    buf += c;
    buf += '\n';
  }
  return sha256_hex(buf);
}

Vocabulary build_vocabulary(std::span<const DiagnosisEvent> events) {
  std::vector<std::string> codes;
  codes.reserve(events.size());
  for (const auto& e : events) codes.push_back(e.icd_code);
  return Vocabulary::from_codes(VocabKind::diagnosis, std::move(codes));
}

Vocabulary build_vocabulary(std::span<const LabEvent> events) {
  std::vector<std::string> codes;
  codes.reserve(events.size());
  for (const auto& e : events) codes.push_back(e.item_code);
  return Vocabulary::from_codes(VocabKind::lab, std::move(codes));
}

bool check_vocabulary_size(const Vocabulary& vocab, std::size_t expected) {
  if (vocab.size() == expected) return true;
  spdlog::warn("{} vocabulary has {} codes, expected {}", to_string(vocab.kind()), vocab.size(), expected);
  return false;
}

}  // namespace mplite::ehr
