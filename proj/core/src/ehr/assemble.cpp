// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/ehr/assemble.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "mplite/common/error.hpp"

namespace mplite::ehr {
namespace {

struct VisitSlot {
  std::size_t patient;
  std::size_t visit;
};

std::string describe(std::string_view table, std::size_t row, std::string_view patient, std::string_view visit) {
  std::string s(table);
  if (row > 0) s += " row " + std::to_string(row);
  s += " (patient " + std::string(patient) + ", visit " + std::string(visit) + ")";
  return s;
}

}  // namespace

std::vector<PatientRecord> assemble_patients(std::span<const AdmissionEvent> admissions,
                                             std::span<const DiagnosisEvent> diagnoses,
                                             std::span<const LabEvent> labevents) {
  std::map<std::string, std::vector<const AdmissionEvent*>, std::less<>> by_patient;
  for (const auto& a : admissions) by_patient[a.patient_id].push_back(&a);

  std::vector<PatientRecord> patients;
  patients.reserve(by_patient.size());
  std::unordered_map<std::string, VisitSlot> visit_index;
  for (auto& [pid, adms] : by_patient) {
    std::sort(adms.begin(), adms.end(), [](const AdmissionEvent* a, const AdmissionEvent* b) {
      if (a->admit_time != b->admit_time) return a->admit_time < b->admit_time;
      return a->visit_id < b->visit_id;
    });
    PatientRecord rec;
    rec.patient_id = pid;
    for (const auto* a : adms) {
      auto [it, inserted] = visit_index.emplace(a->visit_id, VisitSlot{patients.size(), rec.visits.size()});
      if (!inserted) {
        throw DataError("duplicate visit_id at " + describe("admissions", a->row, pid, a->visit_id));
      }
      rec.visits.push_back(Visit{a->visit_id, a->admit_time, {}, {}});
    }
    patients.push_back(std::move(rec));
  }

  auto resolve = [&](std::string_view table, std::size_t row, const std::string& pid,
                     const std::string& vid) -> VisitSlot {
    auto it = visit_index.find(vid);
    if (it == visit_index.end()) {
      throw DataError("unknown visit referenced by " + describe(table, row, pid, vid));
    }
    if (patients[it->second.patient].patient_id != pid) {
      throw DataError("visit belongs to patient " + patients[it->second.patient].patient_id +
                      ", referenced by " + describe(table, row, pid, vid));
    }
    return it->second;
  };

  for (const auto& d : diagnoses) {
    const auto slot = resolve("diagnoses", d.row, d.patient_id, d.visit_id);
    patients[slot.patient].visits[slot.visit].diag_codes.insert(d.icd_code);
  }

  // Per patient and item, results ordered by (timestamp, abnormal) so the
  // last entry at or before a visit decides, with abnormal winning ties.
  std::vector<std::map<std::string, std::vector<std::pair<std::int64_t, bool>>>> results(patients.size());
  for (const auto& l : labevents) {
    const auto slot = resolve("labevents", l.row, l.patient_id, l.visit_id);
    results[slot.patient][l.item_code].emplace_back(l.timestamp, l.abnormal);
    ++patients[slot.patient].lab_event_count;
  }

  for (std::size_t p = 0; p < patients.size(); ++p) {
    auto& visits = patients[p].visits;
    for (auto& [item, series] : results[p]) {
      std::sort(series.begin(), series.end());
      std::size_t cursor = 0;
      bool state = false;
      for (auto& visit : visits) {
        while (cursor < series.size() && series[cursor].first <= visit.admit_time) {
          state = series[cursor].second;
          ++cursor;
        }
        if (state) visit.lab_abnormal.insert(item);
      }
    }
  }
  return patients;
}

EncodedVisit encode_visit(const Visit& visit, const Vocabulary& diag_vocab, const Vocabulary& lab_vocab,
                          UnknownCodePolicy policy, EncodeStats* stats) {
  EncodedVisit out{MultiHot(diag_vocab.size()), MultiHot(lab_vocab.size())};
  for (const auto& code : visit.diag_codes) {
    if (auto idx = diag_vocab.index_of(code)) {
      out.diag.set(*idx);
    } else if (policy == UnknownCodePolicy::error) {
      throw DataError("visit " + visit.visit_id + ": diagnosis code '" + code + "' is not in the vocabulary");
    } else if (stats) {
      ++stats->dropped_diag;
    }
  }
  for (const auto& item : visit.lab_abnormal) {
    if (auto idx = lab_vocab.index_of(item)) {
      out.lab.set(*idx);
    } else if (policy == UnknownCodePolicy::error) {
      throw DataError("visit " + visit.visit_id + ": lab item '" + item + "' is not in the vocabulary");
    } else if (stats) {
      ++stats->dropped_lab;
    }
  }
  return out;
}

}  // namespace mplite::ehr
