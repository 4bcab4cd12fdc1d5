// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/pretrain/lab_module.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mplite/common/error.hpp"
#include "mplite/common/hash.hpp"
#include "mplite/common/log.hpp"
#include "mplite/ehr/assemble.hpp"
#include "mplite/pretrain/integrate.hpp"

namespace mplite::pretrain {

void validate(const PretrainConfig& c) {
  if (c.hidden == 0) throw ValidationError("pretrain: hidden size must be positive");
  if (c.batch_size == 0) throw ValidationError("pretrain: batch size must be positive");
  if (c.epochs < 2) throw ValidationError("pretrain: epochs must be at least 2");
  if (c.patience < 1) throw ValidationError("pretrain: patience must be at least 1");
  if (!(c.holdout_fraction >= 0.0 && c.holdout_fraction < 1.0)) {
    throw ValidationError("pretrain: holdout_fraction must lie in [0, 1)");
  }
  if (!(c.lr.start > 0.0 && c.lr.end > 0.0)) throw ValidationError("pretrain: learning rates must be positive");
}

PretrainedLabModule make_lab_module(const ehr::Vocabulary& lab_vocab, const ehr::Vocabulary& diag_vocab,
                                    std::size_t hidden, nn::Activation encoder_activation, nn::Rng& rng) {
  if (lab_vocab.size() == 0 || diag_vocab.size() == 0 || hidden == 0) {
    throw ValidationError("lab module: vocabularies and hidden size must be non-empty");
  }
  PretrainedLabModule m;
  m.encoder = nn::make_dense(lab_vocab.size(), hidden, encoder_activation, rng);
  m.decoder = nn::make_dense(hidden, diag_vocab.size(), nn::Activation::sigmoid, rng);
  m.lab_vocab_fingerprint = lab_vocab.fingerprint();
  m.diag_vocab_fingerprint = diag_vocab.fingerprint();
  m.config.hidden = hidden;
  m.config.encoder_activation = encoder_activation;
  return m;
}

std::vector<nn::ParamBlock> parameters(PretrainedLabModule& module) {
  auto blocks = nn::parameters(module.encoder, "encoder");
  auto dec = nn::parameters(module.decoder, "decoder");
  blocks.insert(blocks.end(), dec.begin(), dec.end());
  return blocks;
}

std::string weight_checksum(const PretrainedLabModule& module) {
  std::vector<double> all;
  for (const auto* layer : {&module.encoder, &module.decoder}) {
    const auto w = nn::flat(layer->weight);
    const auto b = nn::flat(layer->bias);
    all.insert(all.end(), w.begin(), w.end());
    all.insert(all.end(), b.begin(), b.end());
  }
  return sha256_hex(std::span<const double>(all));
}

void check_vocabularies(const PretrainedLabModule& module, const ehr::Vocabulary& lab_vocab,
                        const ehr::Vocabulary& diag_vocab) {
  if (lab_vocab.fingerprint() != module.lab_vocab_fingerprint) {
    throw ValidationError("lab module was trained against a different lab vocabulary (fingerprint mismatch)");
  }
  if (diag_vocab.fingerprint() != module.diag_vocab_fingerprint) {
    throw ValidationError("lab module was trained against a different diagnosis vocabulary (fingerprint mismatch)");
  }
}

PretrainOutput pretrain_forward(const PretrainedLabModule& module, const nn::Vector& x_lab) {
  PretrainOutput out;
  out.h_lab = nn::dense_apply(module.encoder, x_lab);
  out.y_hat = nn::dense_apply(module.decoder, out.h_lab);
  return out;
}

PretrainOutput pretrain_forward(const PretrainedLabModule& module, const ehr::MultiHot& x_lab,
                                const ehr::Vocabulary& lab_vocab, const ehr::Vocabulary& diag_vocab) {
  check_vocabularies(module, lab_vocab, diag_vocab);
  return pretrain_forward(module, nn::to_vector(x_lab));
}

nn::Vector encode_lab(const PretrainedLabModule& module, const nn::Vector& x_lab) {
  if (!module.frozen) throw std::logic_error("encode_lab: lab module is not frozen");
  return nn::dense_apply(module.encoder, x_lab);
}

nn::Vector encode_lab(const PretrainedLabModule& module, const ehr::MultiHot& x_lab) {
  return encode_lab(module, nn::to_vector(x_lab));
}

std::vector<PretrainSample> build_pretrain_set(const ehr::Dataset& data, std::span<const std::string> train_ids,
                                               PretrainSetStats* stats) {
  PretrainSetStats local;
  std::vector<std::string> train(train_ids.begin(), train_ids.end());
  std::sort(train.begin(), train.end());
  std::vector<PretrainSample> out;
  for (const auto& id : data.cohorts.pretrain.patient_ids) {
    const auto& patient = data.patient(id);
    const bool single = patient.visit_count() == 1;
    if (!single && !std::binary_search(train.begin(), train.end(), id)) {
      ++local.excluded_multi_visit;
      continue;
    }
    std::vector<ehr::MultiHot> labs;
    ehr::MultiHot y(data.diag_vocab.size());
    for (const auto& visit : patient.visits) {
      auto encoded = ehr::encode_visit(visit, data.diag_vocab, data.lab_vocab);
      y |= encoded.diag;
      labs.push_back(std::move(encoded.lab));
    }
    if (y.none()) {
      ++local.dropped_empty_target;
      continue;
    }
    ++(single ? local.single_visit : local.multi_visit);
    out.push_back(PretrainSample{id, integrate(labs), std::move(y)});
  }
  if (local.dropped_empty_target > 0) {
    log_warn("pretrain set: dropped " + std::to_string(local.dropped_empty_target) +
             " patients without diagnosis codes");
  }
  if (stats) *stats = local;
  if (out.empty()) throw ValidationError("pretrain set is empty: no eligible patients with lab events");
  return out;
}

}  // namespace mplite::pretrain
