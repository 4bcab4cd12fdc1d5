// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/fusion/checkpoint.hpp"

#include <cmath>
#include <string>

#include "../nn/weights_io.hpp"
#include "json.hpp"
#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"
#include "mplite/pretrain/checkpoint.hpp"

namespace mplite::fusion {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_from(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace

std::string experiment_to_json(const FusedModel& model, const ExperimentMeta& meta) {
  const auto& c = meta.config;
  json history = json::array();
  for (const auto& e : meta.history) {
    history.push_back({{"epoch", e.epoch},
                       {"lr", e.lr},
                       {"train_loss", number(e.train_loss)},
                       {"val_loss", number(e.val_loss)},
                       {"val_metric", number(e.val_metric)}});
  }
  json backbone{{"gru", nn::gru_to_json(model.backbone.gru)}};
  if (model.backbone.projection) backbone["projection"] = nn::dense_to_json(*model.backbone.projection);
  const json j{{"format", std::string(pretrain::kCheckpointFormat)},
               {"kind", "experiment"},
               {"task", std::string(ehr::to_string(model.task))},
               {"mode", std::string(to_string(model.mode()))},
               {"seed", meta.seed},
               {"lab_module_sha256", meta.lab_module_sha256},
               {"diag_vocab_fingerprint", meta.diag_vocab_fingerprint},
               {"lab_vocab_fingerprint", meta.lab_vocab_fingerprint},
               {"config",
                {{"gru_hidden", c.gru_hidden},
                 {"projection_dim", c.projection_dim},
                 {"dropout", c.dropout},
                 {"batch_size", c.batch_size},
                 {"epochs", c.epochs},
                 {"lr_start", c.lr.start},
                 {"lr_end", c.lr.end},
                 {"lr_schedule", std::string(nn::to_string(c.lr.kind))},
                 {"lr_steps", c.lr.steps},
                 {"threshold", c.threshold}}},
               {"selection",
                {{"metric", meta.selection_metric},
                 {"best_epoch", meta.best_epoch},
                 {"best_val_metric", number(meta.best_val_metric)}}},
               {"history", history},
               {"backbone", backbone},
               {"classifier", nn::dense_to_json(model.classifier)}};
  return j.dump(1) + "\n";
}

void save_experiment(const FusedModel& model, const ExperimentMeta& meta, const std::filesystem::path& path) {
  write_file_atomic(path, experiment_to_json(model, meta));
}

Experiment load_experiment(const std::filesystem::path& path,
                           std::shared_ptr<const pretrain::PretrainedLabModule> lab_module,
                           std::string_view lab_module_sha256) {
  const std::string where = path.string() + ": ";
  Experiment e;
  Mode mode = Mode::baseline;
  try {
    const json j = json::parse(read_file(path));
    if (j.at("format").get<std::string>() != pretrain::kCheckpointFormat ||
        j.at("kind").get<std::string>() != "experiment") {
      throw DataError(where + "unsupported checkpoint format or kind");
    }
    mode = parse_mode(j.at("mode").get<std::string>());
    auto& m = e.meta;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.lab_module_sha256 = j.at("lab_module_sha256").get<std::string>();
    m.diag_vocab_fingerprint = j.at("diag_vocab_fingerprint").get<std::string>();
    m.lab_vocab_fingerprint = j.at("lab_vocab_fingerprint").get<std::string>();
    const auto& c = j.at("config");
    m.config.gru_hidden = c.at("gru_hidden").get<std::size_t>();
    m.config.projection_dim = c.at("projection_dim").get<std::size_t>();
    m.config.dropout = c.at("dropout").get<double>();
    m.config.batch_size = c.at("batch_size").get<std::size_t>();
    m.config.epochs = c.at("epochs").get<int>();
    m.config.lr.start = c.at("lr_start").get<double>();
    m.config.lr.end = c.at("lr_end").get<double>();
    m.config.lr.kind = nn::parse_schedule(c.at("lr_schedule").get<std::string>());
    m.config.lr.steps = c.at("lr_steps").get<int>();
    m.config.threshold = c.at("threshold").get<double>();
    const auto& sel = j.at("selection");
    m.selection_metric = sel.at("metric").get<std::string>();
    m.best_epoch = sel.at("best_epoch").get<int>();
    m.best_val_metric = number_from(sel.at("best_val_metric"));
    for (const auto& h : j.at("history")) {
      m.history.push_back({h.at("epoch").get<int>(), h.at("lr").get<double>(), number_from(h.at("train_loss")),
                           number_from(h.at("val_loss")), number_from(h.at("val_metric"))});
    }
    e.model.task = ehr::parse_task(j.at("task").get<std::string>());
    e.model.dropout_rate = m.config.dropout;
    e.model.backbone.gru = nn::gru_from_json(j.at("backbone").at("gru"));
    if (j.at("backbone").contains("projection")) {
      e.model.backbone.projection = nn::dense_from_json(j.at("backbone").at("projection"), "backbone.projection");
    }
    e.model.classifier = nn::dense_from_json(j.at("classifier"), "classifier");
  } catch (const json::exception& ex) {
    throw DataError(where + ex.what());
  }

  if (mode == Mode::mplite) {
    if (!lab_module) {
      throw ValidationError(where + "mplite checkpoint needs the lab module it was trained with; run 'pretrain' first");
    }
    if (lab_module_sha256 != e.meta.lab_module_sha256) {
      throw ValidationError(where + "lab module checkpoint differs from the one used in training (sha256 " +
                            std::string(lab_module_sha256) + " vs recorded " + e.meta.lab_module_sha256 + ")");
    }
    if (lab_module->diag_vocab_fingerprint != e.meta.diag_vocab_fingerprint ||
        lab_module->lab_vocab_fingerprint != e.meta.lab_vocab_fingerprint) {
      throw ValidationError(where + "vocabulary fingerprints differ from the lab module's");
    }
    e.model.lab_module = std::move(lab_module);
  }
  try {
    check_model(e.model);
  } catch (const ValidationError& ex) {
    throw DataError(where + ex.what());
  }
  return e;
}

}  // namespace mplite::fusion
