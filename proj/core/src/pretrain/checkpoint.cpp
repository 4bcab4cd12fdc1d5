// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/pretrain/checkpoint.hpp"

#include <string>

#include "../nn/weights_io.hpp"
#include "json.hpp"
#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"

namespace mplite::pretrain {

using nlohmann::json;

std::string module_to_json(const PretrainedLabModule& m) {
  const auto& c = m.config;
  json j{{"format", std::string(kCheckpointFormat)},
         {"kind", "lab_module"},
         {"hidden", m.hidden_size()},
         {"n_lab", m.lab_dim()},
         {"n_diag", m.diag_dim()},
         {"lab_vocab_fingerprint", m.lab_vocab_fingerprint},
         {"diag_vocab_fingerprint", m.diag_vocab_fingerprint},
         {"seed", m.seed},
         {"config",
          {{"hidden", c.hidden},
           {"batch_size", c.batch_size},
           {"epochs", c.epochs},
           {"lr_start", c.lr.start},
           {"lr_end", c.lr.end},
           {"lr_schedule", std::string(nn::to_string(c.lr.kind))},
           {"lr_steps", c.lr.steps},
           {"patience", c.patience},
           {"holdout_fraction", c.holdout_fraction},
           {"encoder_activation", std::string(nn::to_string(c.encoder_activation))}}},
         {"encoder", nn::dense_to_json(m.encoder)},
         {"decoder", nn::dense_to_json(m.decoder)}};
  return j.dump(1) + "\n";
}

PretrainedLabModule module_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kCheckpointFormat || j.at("kind").get<std::string>() != "lab_module") {
      throw DataError("lab module checkpoint: unsupported format or kind");
    }
    PretrainedLabModule m;
    m.encoder = nn::dense_from_json(j.at("encoder"), "encoder");
    m.decoder = nn::dense_from_json(j.at("decoder"), "decoder");
    m.lab_vocab_fingerprint = j.at("lab_vocab_fingerprint").get<std::string>();
    m.diag_vocab_fingerprint = j.at("diag_vocab_fingerprint").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& c = j.at("config");
    m.config.hidden = c.at("hidden").get<std::size_t>();
    m.config.batch_size = c.at("batch_size").get<std::size_t>();
    m.config.epochs = c.at("epochs").get<int>();
    m.config.lr.start = c.at("lr_start").get<double>();
    m.config.lr.end = c.at("lr_end").get<double>();
    m.config.lr.kind = nn::parse_schedule(c.at("lr_schedule").get<std::string>());
    m.config.lr.steps = c.at("lr_steps").get<int>();
    m.config.patience = c.at("patience").get<int>();
    m.config.holdout_fraction = c.at("holdout_fraction").get<double>();
    m.config.encoder_activation = nn::parse_activation(c.at("encoder_activation").get<std::string>());
    if (m.decoder.activation != nn::Activation::sigmoid || m.decoder.in_dim() != m.encoder.out_dim() ||
        m.hidden_size() != j.at("hidden").get<std::size_t>() || m.lab_dim() != j.at("n_lab").get<std::size_t>() ||
        m.diag_dim() != j.at("n_diag").get<std::size_t>()) {
      throw DataError("lab module checkpoint: layer shapes are inconsistent");
    }
    m.frozen = true;
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("lab module checkpoint: ") + e.what());
  }
}

void save_module(const PretrainedLabModule& module, const std::filesystem::path& path) {
  if (!module.frozen) throw std::logic_error("save_module: module is not frozen");
  write_file_atomic(path, module_to_json(module));
}

PretrainedLabModule load_module(const std::filesystem::path& path) {
  try {
    return module_from_json(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

PretrainedLabModule load_module(const std::filesystem::path& path, const ehr::Vocabulary& lab_vocab,
                                const ehr::Vocabulary& diag_vocab) {
  auto m = load_module(path);
  check_vocabularies(m, lab_vocab, diag_vocab);
  return m;
}

}  // namespace mplite::pretrain
