// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "mplite/ehr/cohort.hpp"
#include "mplite/ehr/types.hpp"
#include "mplite/ehr/vocabulary.hpp"

namespace mplite::ehr {

// Assembled, immutable view of one extraction: patients, vocabularies and
// the two cohorts.
struct Dataset {
  std::vector<PatientRecord> patients;  // sorted by patient_id
  Vocabulary diag_vocab;
  Vocabulary lab_vocab;
  CohortSelection cohorts;

  const PatientRecord& patient(std::string_view id) const;
  std::size_t single_visit_count() const;
  std::size_t multi_visit_count() const;
};

Dataset build_dataset(std::span<const AdmissionEvent> admissions, std::span<const DiagnosisEvent> diagnoses,
                      std::span<const LabEvent> labevents);

// Reads admissions.csv, diagnoses.csv and labevents.csv from `dir`.
Dataset load_dataset(const std::filesystem::path& dir);

inline constexpr std::string_view kAdmissionsFile = "admissions.csv";
inline constexpr std::string_view kDiagnosesFile = "diagnoses.csv";
inline constexpr std::string_view kLabeventsFile = "labevents.csv";

}  // namespace mplite::ehr
