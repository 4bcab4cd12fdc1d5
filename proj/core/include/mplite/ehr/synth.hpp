// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mplite/ehr/types.hpp"

namespace mplite::ehr {

// Planted generative process for desk-scale experiments.
//
// Every disease d owns a fixed set of lab items that turn abnormal while d
// is active. A patient starts with K ~ U{1..max_conditions} active diseases
// drawn without replacement in proportion to a Zipf-like prevalence. Between
// visits each active disease persists with probability `persistence` and a
// new one appears with probability `onset_rate`. At every visit each active
// disease is coded unless missed (`miss_rate`), and every lab bit is flipped
// with probability `lab_flip_rate`. The first `n_heart_failure` diseases
// carry 428.x codes.
struct GenConfig {
  std::size_t n_diag = 40;
  std::size_t n_lab = 50;
  std::size_t n_patients = 1000;
  double single_visit_fraction = 0.6;
  std::size_t min_visits = 2;  // for multi-visit patients
  std::size_t max_visits = 4;
  std::size_t max_conditions = 3;
  std::size_t labs_per_disease = 3;
  bool unique_labs = false;  // disjoint lab sets; needs n_lab >= n_diag * labs_per_disease
  std::size_t n_heart_failure = 2;
  double prevalence_exponent = 0.8;
  double lab_flip_rate = 0.0;
  double persistence = 1.0;
  double onset_rate = 0.0;
  double miss_rate = 0.0;
};

// Throws ValidationError naming the offending field.
void validate(const GenConfig& config);

struct GroundTruth {
  GenConfig config;
  std::uint64_t seed = 0;
  std::vector<std::string> diag_codes;  // indexed by disease id
  std::vector<std::string> lab_codes;   // indexed by lab id
  std::vector<double> prevalence;       // sums to 1
  std::vector<std::vector<std::size_t>> disease_labs;
};

struct SynthDataset {
  std::vector<AdmissionEvent> admissions;
  std::vector<DiagnosisEvent> diagnoses;
  std::vector<LabEvent> labevents;
  GroundTruth truth;
};

SynthDataset synth_generate(const GenConfig& config, std::uint64_t seed);

std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(std::string_view text);

inline constexpr std::string_view kGroundTruthFile = "ground_truth.json";

// Writes the three tables and ground_truth.json into `dir`.
void write_synth_dataset(const SynthDataset& data, const std::filesystem::path& dir);

}  // namespace mplite::ehr
