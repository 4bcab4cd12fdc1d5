// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/ehr/dataset.hpp"

#include <algorithm>

#include "mplite/common/error.hpp"
#include "mplite/ehr/assemble.hpp"
#include "mplite/ehr/csv_tables.hpp"

namespace mplite::ehr {

const PatientRecord& Dataset::patient(std::string_view id) const {
  auto it = std::lower_bound(patients.begin(), patients.end(), id,
                             [](const PatientRecord& p, std::string_view key) { return p.patient_id < key; });
  if (it == patients.end() || it->patient_id != id) {
    throw ValidationError("unknown patient '" + std::string(id) + "'");
  }
  return *it;
}

std::size_t Dataset::single_visit_count() const {
  return static_cast<std::size_t>(
      std::count_if(patients.begin(), patients.end(), [](const PatientRecord& p) { return p.visit_count() == 1; }));
}

std::size_t Dataset::multi_visit_count() const {
  return static_cast<std::size_t>(
      std::count_if(patients.begin(), patients.end(), [](const PatientRecord& p) { return p.visit_count() >= 2; }));
}

Dataset build_dataset(std::span<const AdmissionEvent> admissions, std::span<const DiagnosisEvent> diagnoses,
                      std::span<const LabEvent> labevents) {
  Dataset ds;
  ds.patients = assemble_patients(admissions, diagnoses, labevents);
  ds.diag_vocab = build_vocabulary(diagnoses);
  ds.lab_vocab = build_vocabulary(labevents);
  ds.cohorts = select_cohorts(ds.patients);
  return ds;
}

Dataset load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ValidationError("data directory " + dir.string() + " does not exist");
  }
  const auto admissions = load_admissions(dir / kAdmissionsFile);
  const auto diagnoses = load_diagnoses(dir / kDiagnosesFile);
  const auto labevents = load_labevents(dir / kLabeventsFile);
  return build_dataset(admissions, diagnoses, labevents);
}

}  // namespace mplite::ehr
