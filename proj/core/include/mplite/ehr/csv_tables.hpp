// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mplite/ehr/types.hpp"

namespace mplite::ehr {

// Header columns may appear in any order and extra columns are ignored.
// Column names are matched case-insensitively.
//   admissions.csv  patient_id, visit_id, admit_time
//   diagnoses.csv   patient_id, visit_id, icd_code
//   labevents.csv   patient_id, visit_id, item_code, abnormal, timestamp
//
// Malformed rows raise DataError naming the file and the 1-based row.
std::vector<AdmissionEvent> load_admissions(const std::filesystem::path& path);
std::vector<DiagnosisEvent> load_diagnoses(const std::filesystem::path& path);
std::vector<LabEvent> load_labevents(const std::filesystem::path& path);

// Same parsers over in-memory text; `source` names the input in errors.
std::vector<AdmissionEvent> parse_admissions(std::string_view text, std::string_view source);
std::vector<DiagnosisEvent> parse_diagnoses(std::string_view text, std::string_view source);
std::vector<LabEvent> parse_labevents(std::string_view text, std::string_view source);

std::string format_admissions(std::span<const AdmissionEvent> rows);
std::string format_diagnoses(std::span<const DiagnosisEvent> rows);
std::string format_labevents(std::span<const LabEvent> rows);

// Splits one CSV record, honouring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace mplite::ehr
