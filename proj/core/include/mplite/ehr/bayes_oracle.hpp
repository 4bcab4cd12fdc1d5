// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "mplite/ehr/multi_hot.hpp"
#include "mplite/ehr/synth.hpp"
#include "mplite/ehr/vocabulary.hpp"

namespace mplite::ehr {

// Exact posterior predictor for the proxy task (integrated labs -> union of
// diagnoses) under a planted model with static conditions: persistence 1,
// no onsets, no missed codes. Lab flip noise is allowed.
//
// Enumerates every admissible disease set Z, weights it by prior times the
// likelihood of the integrated lab vector, and scores code d by
// E[1{d in Z} / |Z|], which maximises expected Recall@k for every k.
class BayesOracle {
 public:
  // Throws ValidationError for dynamics the enumeration does not cover.
  BayesOracle(const GroundTruth& truth, const Vocabulary& lab_vocab, const Vocabulary& diag_vocab);

  // `labs` is over lab_vocab; the result is aligned with diag_vocab.
  std::vector<double> scores(const MultiHot& labs, std::size_t n_visits) const;

  std::size_t enumerated_sets() const noexcept { return sets_.size(); }

 private:
  struct Candidate {
    std::vector<std::size_t> diseases;
    std::vector<std::uint8_t> labs;  // over ground-truth lab ids
    double prior = 0.0;
  };

  GroundTruth truth_;
  std::vector<std::ptrdiff_t> lab_vocab_to_truth_;
  std::vector<std::ptrdiff_t> truth_to_diag_vocab_;
  std::size_t diag_vocab_size_ = 0;
  std::vector<Candidate> sets_;
};

}  // namespace mplite::ehr
