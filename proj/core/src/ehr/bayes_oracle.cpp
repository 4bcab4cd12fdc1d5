// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/ehr/bayes_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mplite/common/error.hpp"

namespace mplite::ehr {
namespace {

constexpr std::size_t kMaxEnumeratedSets = 2'000'000;

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Probability that sequential prevalence-weighted draws without replacement
// produce exactly this set, summed over draw orders.
double set_probability(std::vector<std::size_t> set, const std::vector<double>& prevalence) {
  std::sort(set.begin(), set.end());
  double total = 0.0;
  do {
    double p = 1.0;
    double used = 0.0;
    for (auto d : set) {
      p *= prevalence[d] / (1.0 - used);
      used += prevalence[d];
    }
    total += p;
  } while (std::next_permutation(set.begin(), set.end()));
  return total;
}

}  // namespace

BayesOracle::BayesOracle(const GroundTruth& truth, const Vocabulary& lab_vocab, const Vocabulary& diag_vocab)
    : truth_(truth), diag_vocab_size_(diag_vocab.size()) {
  const GenConfig& c = truth.config;
  if (c.persistence != 1.0 || c.onset_rate != 0.0 || c.miss_rate != 0.0) {
    throw ValidationError("Bayes oracle needs static conditions (persistence 1, onset_rate 0, miss_rate 0)");
  }
  double n_sets = 0.0;
  for (std::size_t k = 1; k <= c.max_conditions; ++k) n_sets += binomial(c.n_diag, k);
  if (n_sets > static_cast<double>(kMaxEnumeratedSets)) {
    throw ValidationError("Bayes oracle: too many candidate disease sets to enumerate");
  }

  lab_vocab_to_truth_.assign(lab_vocab.size(), -1);
  for (std::size_t l = 0; l < truth.lab_codes.size(); ++l) {
    if (auto idx = lab_vocab.index_of(truth.lab_codes[l])) lab_vocab_to_truth_[*idx] = static_cast<std::ptrdiff_t>(l);
  }
  truth_to_diag_vocab_.assign(truth.diag_codes.size(), -1);
  for (std::size_t d = 0; d < truth.diag_codes.size(); ++d) {
    if (auto idx = diag_vocab.index_of(truth.diag_codes[d])) truth_to_diag_vocab_[d] = static_cast<std::ptrdiff_t>(*idx);
  }

  const double size_prior = 1.0 / static_cast<double>(c.max_conditions);
  std::vector<std::size_t> current;
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (!current.empty()) {
      Candidate cand;
      cand.diseases = current;
      cand.labs.assign(c.n_lab, 0);
      for (auto d : current) {
        for (auto l : truth.disease_labs[d]) cand.labs[l] = 1;
      }
      cand.prior = size_prior * set_probability(current, truth.prevalence);
      sets_.push_back(std::move(cand));
    }
    if (current.size() == c.max_conditions) return;
    for (std::size_t d = start; d < c.n_diag; ++d) {
      current.push_back(d);
      extend(d + 1);
      current.pop_back();
    }
  };
  extend(0);
}

std::vector<double> BayesOracle::scores(const MultiHot& labs, std::size_t n_visits) const {
  if (labs.size() != lab_vocab_to_truth_.size()) {
    throw ValidationError("Bayes oracle: lab vector length does not match the lab vocabulary");
  }
  if (n_visits == 0) throw ValidationError("Bayes oracle: n_visits must be positive");
  const GenConfig& c = truth_.config;
  std::vector<std::uint8_t> observed(c.n_lab, 0);
  for (std::size_t i = 0; i < labs.size(); ++i) {
    if (labs.test(i) && lab_vocab_to_truth_[i] >= 0) observed[static_cast<std::size_t>(lab_vocab_to_truth_[i])] = 1;
  }

  // Integrated bit = OR over visits of (true bit XOR flip).
  const double eps = c.lab_flip_rate;
  const double t = static_cast<double>(n_visits);
  const double p_on_given_on = 1.0 - std::pow(eps, t);
  const double p_on_given_off = 1.0 - std::pow(1.0 - eps, t);

  std::vector<double> posterior(sets_.size(), 0.0);
  double evidence = 0.0;
  for (std::size_t s = 0; s < sets_.size(); ++s) {
    std::size_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    for (std::size_t l = 0; l < c.n_lab; ++l) {
      const bool truth_on = sets_[s].labs[l] != 0;
      const bool obs_on = observed[l] != 0;
      if (truth_on) {
        obs_on ? ++n11 : ++n10;
      } else {
        obs_on ? ++n01 : ++n00;
      }
    }
    const double lik = std::pow(p_on_given_on, static_cast<double>(n11)) *
                       std::pow(1.0 - p_on_given_on, static_cast<double>(n10)) *
                       std::pow(p_on_given_off, static_cast<double>(n01)) *
                       std::pow(1.0 - p_on_given_off, static_cast<double>(n00));
    posterior[s] = sets_[s].prior * lik;
    evidence += posterior[s];
  }
  if (!(evidence > 0.0)) {
    // Observation impossible under the model; fall back to the prior.
    evidence = 0.0;
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      posterior[s] = sets_[s].prior;
      evidence += posterior[s];
    }
  }

  std::vector<double> out(diag_vocab_size_, 0.0);
  for (std::size_t s = 0; s < sets_.size(); ++s) {
    const double w = posterior[s] / evidence / static_cast<double>(sets_[s].diseases.size());
    for (auto d : sets_[s].diseases) {
      if (truth_to_diag_vocab_[d] >= 0) out[static_cast<std::size_t>(truth_to_diag_vocab_[d])] += w;
    }
  }
  return out;
}

}  // namespace mplite::ehr
