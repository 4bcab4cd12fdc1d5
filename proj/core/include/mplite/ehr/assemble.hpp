// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mplite/ehr/multi_hot.hpp"
#include "mplite/ehr/types.hpp"
#include "mplite/ehr/vocabulary.hpp"

namespace mplite::ehr {

// Groups events into patients ordered by patient_id, with visits ordered by
// (admit_time, visit_id). A lab item is abnormal at a visit when its most
// recent result with timestamp <= admit_time was abnormal; simultaneous
// results resolve to abnormal.
//
// Throws DataError for duplicate visit ids and for events that reference a
// visit that does not exist or belongs to another patient.
std::vector<PatientRecord> assemble_patients(std::span<const AdmissionEvent> admissions,
                                             std::span<const DiagnosisEvent> diagnoses,
                                             std::span<const LabEvent> labevents);

enum class UnknownCodePolicy { drop, error };

struct EncodeStats {
  std::size_t dropped_diag = 0;
  std::size_t dropped_lab = 0;
};

struct EncodedVisit {
  MultiHot diag;
  MultiHot lab;
};

EncodedVisit encode_visit(const Visit& visit, const Vocabulary& diag_vocab, const Vocabulary& lab_vocab,
                          UnknownCodePolicy policy = UnknownCodePolicy::drop,
                          EncodeStats* stats = nullptr);

}  // namespace mplite::ehr
