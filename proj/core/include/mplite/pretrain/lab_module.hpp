// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mplite/ehr/cohort.hpp"
#include "mplite/ehr/dataset.hpp"
#include "mplite/ehr/multi_hot.hpp"
#include "mplite/ehr/vocabulary.hpp"
#include "mplite/nn/dense.hpp"
#include "mplite/nn/rng.hpp"
#include "mplite/nn/schedule.hpp"
#include "mplite/nn/tensor.hpp"

namespace mplite::pretrain {

struct PretrainConfig {
  std::size_t hidden = 200;
  std::size_t batch_size = 64;
  int epochs = 100;
  nn::LrSchedule lr;
  int patience = 10;
  double holdout_fraction = 0.1;
  nn::Activation encoder_activation = nn::Activation::relu;
};

void validate(const PretrainConfig& config);

// Lab results -> diagnoses network. Only the encoder is reused downstream.
struct PretrainedLabModule {
  nn::DenseLayer encoder;  // |L| -> h
  nn::DenseLayer decoder;  // h -> |D|, sigmoid
  std::string lab_vocab_fingerprint;
  std::string diag_vocab_fingerprint;
  bool frozen = false;
  PretrainConfig config;
  std::uint64_t seed = 0;

  std::size_t hidden_size() const noexcept { return encoder.out_dim(); }
  std::size_t lab_dim() const noexcept { return encoder.in_dim(); }
  std::size_t diag_dim() const noexcept { return decoder.out_dim(); }
};

PretrainedLabModule make_lab_module(const ehr::Vocabulary& lab_vocab, const ehr::Vocabulary& diag_vocab,
                                    std::size_t hidden, nn::Activation encoder_activation, nn::Rng& rng);

std::vector<nn::ParamBlock> parameters(PretrainedLabModule& module);

// SHA-256 over all weights in parameter order.
std::string weight_checksum(const PretrainedLabModule& module);

// Throws ValidationError when either vocabulary differs from the one the
// module was trained against.
void check_vocabularies(const PretrainedLabModule& module, const ehr::Vocabulary& lab_vocab,
                        const ehr::Vocabulary& diag_vocab);

struct PretrainOutput {
  nn::Vector h_lab;
  nn::Vector y_hat;
};

PretrainOutput pretrain_forward(const PretrainedLabModule& module, const nn::Vector& x_lab);
PretrainOutput pretrain_forward(const PretrainedLabModule& module, const ehr::MultiHot& x_lab,
                                const ehr::Vocabulary& lab_vocab, const ehr::Vocabulary& diag_vocab);

// Encoder-only forward pass. Requires a frozen module.
nn::Vector encode_lab(const PretrainedLabModule& module, const nn::Vector& x_lab);
nn::Vector encode_lab(const PretrainedLabModule& module, const ehr::MultiHot& x_lab);

struct PretrainSample {
  std::string patient_id;
  ehr::MultiHot x_lab;  // integrated over all visits
  ehr::MultiHot y;      // union of all visit diagnoses
};

struct PretrainSetStats {
  std::size_t single_visit = 0;
  std::size_t multi_visit = 0;
  std::size_t excluded_multi_visit = 0;
  std::size_t dropped_empty_target = 0;
};

// Single-visit patients of the pretrain cohort plus multi-visit ones that sit
// in the training split. Throws ValidationError when nothing qualifies.
std::vector<PretrainSample> build_pretrain_set(const ehr::Dataset& data, std::span<const std::string> train_ids,
                                               PretrainSetStats* stats = nullptr);

}  // namespace mplite::pretrain
