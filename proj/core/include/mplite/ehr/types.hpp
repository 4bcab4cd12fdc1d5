// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mplite/ehr/multi_hot.hpp"

namespace mplite::ehr {

// `row` is the 1-based line in the source file (header is row 1); 0 for
// events that did not come from a file.
struct AdmissionEvent {
  std::string patient_id;
  std::string visit_id;
  std::int64_t admit_time = 0;
  std::size_t row = 0;
};

struct DiagnosisEvent {
  std::string patient_id;
  std::string visit_id;
  std::string icd_code;
  std::size_t row = 0;
};

struct LabEvent {
  std::string patient_id;
  std::string visit_id;
  std::string item_code;
  bool abnormal = false;
  std::int64_t timestamp = 0;
  std::size_t row = 0;
};

struct Visit {
  std::string visit_id;
  std::int64_t admit_time = 0;
  std::set<std::string> diag_codes;
  // Items whose most recent result at or before admit_time was abnormal.
  std::set<std::string> lab_abnormal;
};

struct PatientRecord {
  std::string patient_id;
  std::vector<Visit> visits;  // ascending (admit_time, visit_id)
  std::size_t lab_event_count = 0;

  std::size_t visit_count() const noexcept { return visits.size(); }
};

enum class Task { dg, hf };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

struct TaskSample {
  std::string patient_id;
  Task task = Task::dg;
  std::vector<MultiHot> history_diag;
  std::vector<MultiHot> history_lab;
  // DG: multi-hot over the diagnosis vocabulary. HF: a single bit.
  MultiHot label;

  bool hf_positive() const { return task == Task::hf && label.test(0); }
};

}  // namespace mplite::ehr
