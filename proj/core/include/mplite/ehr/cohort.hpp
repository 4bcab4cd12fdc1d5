// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mplite/ehr/assemble.hpp"
#include "mplite/ehr/types.hpp"
#include "mplite/ehr/vocabulary.hpp"

namespace mplite::ehr {

enum class CohortKind { pretrain, prediction };

struct Cohort {
  CohortKind kind = CohortKind::prediction;
  std::vector<std::string> patient_ids;  // sorted

  std::size_t size() const noexcept { return patient_ids.size(); }
  bool contains(std::string_view id) const;
};

struct CohortSelection {
  Cohort pretrain;    // at least one lab event, any number of visits
  Cohort prediction;  // >= 2 visits, every visit carries a diagnosis
};

CohortSelection select_cohorts(std::span<const PatientRecord> patients);

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

// Splits patients (never samples). Sizes are round(n * train),
// round(n * val) and the remainder. Throws ValidationError when the cohort
// has fewer than three patients or the ratios are invalid.
DatasetSplit split_dataset(const Cohort& prediction, const SplitRatios& ratios, std::uint64_t seed);

// ICD-9 heart failure: the part before any '.' starts with "428".
bool is_heart_failure_code(std::string_view code);

// One sample per patient: visits 1..T-1 as history, visit T as the label.
TaskSample make_sample(const PatientRecord& patient, Task task, const Vocabulary& diag_vocab,
                       const Vocabulary& lab_vocab,
                       UnknownCodePolicy policy = UnknownCodePolicy::drop,
                       EncodeStats* stats = nullptr);

// Sliding-window variant: one sample per prefix t = 1..T-1.
std::vector<TaskSample> make_window_samples(const PatientRecord& patient, Task task,
                                            const Vocabulary& diag_vocab, const Vocabulary& lab_vocab,
                                            UnknownCodePolicy policy = UnknownCodePolicy::drop,
                                            EncodeStats* stats = nullptr);

}  // namespace mplite::ehr
