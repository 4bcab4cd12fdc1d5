// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/ehr/cohort.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "mplite/common/error.hpp"
#include "mplite/nn/rng.hpp"

namespace mplite::ehr {

std::string_view to_string(Task task) { return task == Task::dg ? "dg" : "hf"; }

Task parse_task(std::string_view text) {
  if (text == "dg") return Task::dg;
  if (text == "hf") return Task::hf;
  throw ValidationError("unknown task '" + std::string(text) + "' (expected dg or hf)");
}

bool Cohort::contains(std::string_view id) const {
  return std::binary_search(patient_ids.begin(), patient_ids.end(), id,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

CohortSelection select_cohorts(std::span<const PatientRecord> patients) {
  CohortSelection out;
  out.pretrain.kind = CohortKind::pretrain;
  out.prediction.kind = CohortKind::prediction;
  for (const auto& p : patients) {
    if (p.lab_event_count > 0) out.pretrain.patient_ids.push_back(p.patient_id);
    const bool all_coded = std::all_of(p.visits.begin(), p.visits.end(),
                                       [](const Visit& v) { return !v.diag_codes.empty(); });
    if (p.visit_count() >= 2 && all_coded) out.prediction.patient_ids.push_back(p.patient_id);
  }
  std::sort(out.pretrain.patient_ids.begin(), out.pretrain.patient_ids.end());
  std::sort(out.prediction.patient_ids.begin(), out.prediction.patient_ids.end());
  return out;
}

DatasetSplit split_dataset(const Cohort& prediction, const SplitRatios& ratios, std::uint64_t seed) {
  const double r[3] = {ratios.train, ratios.val, ratios.test};
  for (double x : r) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) throw ValidationError("split ratios must lie in [0, 1]");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw ValidationError("split ratios must sum to 1");
  const std::size_t n = prediction.size();
  if (n < 3) {
    throw ValidationError("prediction cohort has " + std::to_string(n) + " patients; at least 3 are needed");
  }

  std::vector<std::string> ids = prediction.patient_ids;
  std::sort(ids.begin(), ids.end());
  nn::Rng rng(seed);
  rng.shuffle(ids);

  auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * r[0]));
  auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * r[1]));
  n_train = std::min(n_train, n);
  n_val = std::min(n_val, n - n_train);

  DatasetSplit split;
  split.seed = seed;
  split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                   ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  for (auto* part : {&split.train, &split.val, &split.test}) std::sort(part->begin(), part->end());
  if (split.test.empty()) spdlog::warn("split produced an empty test set");
  if (split.val.empty()) spdlog::warn("split produced an empty validation set");
  return split;
}

bool is_heart_failure_code(std::string_view code) {
  const auto head = code.substr(0, code.find('.'));
  return head.starts_with("428");
}

namespace {

TaskSample sample_for_prefix(const PatientRecord& patient, std::size_t history_len, Task task,
                             const Vocabulary& diag_vocab, const Vocabulary& lab_vocab, UnknownCodePolicy policy,
                             EncodeStats* stats) {
  TaskSample s;
  s.patient_id = patient.patient_id;
  s.task = task;
  for (std::size_t t = 0; t < history_len; ++t) {
    auto enc = encode_visit(patient.visits[t], diag_vocab, lab_vocab, policy, stats);
    s.history_diag.push_back(std::move(enc.diag));
    s.history_lab.push_back(std::move(enc.lab));
  }
  const Visit& target = patient.visits[history_len];
  if (task == Task::dg) {
    s.label = encode_visit(target, diag_vocab, lab_vocab, policy, stats).diag;
  } else {
    s.label = MultiHot(1);
    s.label.set(0, std::any_of(target.diag_codes.begin(), target.diag_codes.end(),
                               [](const std::string& c) { return is_heart_failure_code(c); }));
  }
  return s;
}

void require_history(const PatientRecord& patient) {
  if (patient.visit_count() < 2) {
    throw ValidationError("patient " + patient.patient_id + " has " + std::to_string(patient.visit_count()) +
                          " visit(s); next-visit samples need at least 2");
  }
}

}  // namespace

TaskSample make_sample(const PatientRecord& patient, Task task, const Vocabulary& diag_vocab,
                       const Vocabulary& lab_vocab, UnknownCodePolicy policy, EncodeStats* stats) {
  require_history(patient);
  return sample_for_prefix(patient, patient.visit_count() - 1, task, diag_vocab, lab_vocab, policy, stats);
}

std::vector<TaskSample> make_window_samples(const PatientRecord& patient, Task task, const Vocabulary& diag_vocab,
                                            const Vocabulary& lab_vocab, UnknownCodePolicy policy,
                                            EncodeStats* stats) {
  require_history(patient);
  std::vector<TaskSample> out;
  for (std::size_t len = 1; len < patient.visit_count(); ++len) {
    out.push_back(sample_for_prefix(patient, len, task, diag_vocab, lab_vocab, policy, stats));
  }
  return out;
}

}  // namespace mplite::ehr
