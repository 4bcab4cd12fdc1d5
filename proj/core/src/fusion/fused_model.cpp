// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/fusion/fused_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mplite/common/error.hpp"
#include "mplite/nn/dropout.hpp"
#include "mplite/nn/loss.hpp"
#include "mplite/pretrain/integrate.hpp"

namespace mplite::fusion {

std::string_view to_string(Mode mode) { return mode == Mode::baseline ? "baseline" : "mplite"; }

Mode parse_mode(std::string_view text) {
  if (text == "baseline") return Mode::baseline;
  if (text == "mplite") return Mode::mplite;
  throw ValidationError("unknown mode '" + std::string(text) + "' (expected baseline or mplite)");
}

void validate(const DownstreamConfig& c) {
  if (c.gru_hidden == 0) throw ValidationError("downstream: gru_hidden must be positive");
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) throw ValidationError("downstream: dropout must lie in [0, 1)");
  if (c.batch_size == 0) throw ValidationError("downstream: batch size must be positive");
  if (c.epochs < 2) throw ValidationError("downstream: epochs must be at least 2");
  if (!(c.lr.start > 0.0 && c.lr.end > 0.0)) throw ValidationError("downstream: learning rates must be positive");
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw ValidationError("downstream: threshold must lie in (0, 1)");
}

FusedModel make_fused_model(ehr::Task task, std::size_t n_diag,
                            std::shared_ptr<const pretrain::PretrainedLabModule> lab_module,
                            const DownstreamConfig& config, nn::Rng& rng) {
  validate(config);
  if (lab_module && !lab_module->frozen) throw std::logic_error("fused model: lab module must be frozen");
  if (lab_module && lab_module->diag_dim() != n_diag) {
    throw ValidationError("fused model: lab module predicts " + std::to_string(lab_module->diag_dim()) +
                          " diagnosis codes but the vocabulary has " + std::to_string(n_diag));
  }
  FusedModel m;
  m.task = task;
  m.lab_module = std::move(lab_module);
  m.dropout_rate = config.dropout;
  nn::Rng backbone_rng = rng.split(0);
  nn::Rng head_rng = rng.split(1);
  m.backbone = backbone::make_backbone(n_diag, config.gru_hidden, config.projection_dim, backbone_rng);
  m.classifier = backbone::make_head(m.backbone.output_dim() + m.lab_hidden(), task, n_diag, head_rng);
  return m;
}

void check_model(const FusedModel& m) {
  if (m.lab_module && !m.lab_module->frozen) throw ValidationError("fused model: lab module is not frozen");
  if (m.classifier.in_dim() != m.backbone.output_dim() + m.lab_hidden()) {
    throw ValidationError("fused model: classifier input size does not equal backbone output plus lab hidden size");
  }
  if (m.classifier.out_dim() != backbone::task_output_dim(m.task, m.n_diag())) {
    throw ValidationError("fused model: classifier output size does not fit the task");
  }
}

std::vector<nn::ParamBlock> trainable_parameters(FusedModel& model) {
  auto blocks = backbone::parameters(model.backbone, "backbone");
  auto head = nn::parameters(model.classifier, "classifier");
  blocks.insert(blocks.end(), head.begin(), head.end());
  return blocks;
}

PreparedSample prepare_sample(const FusedModel& model, const ehr::TaskSample& sample) {
  if (sample.task != model.task) {
    throw ValidationError("sample " + sample.patient_id + " belongs to task " + std::string(ehr::to_string(sample.task)) +
                          ", model predicts " + std::string(ehr::to_string(model.task)));
  }
  if (sample.history_diag.empty() || sample.history_diag.size() != sample.history_lab.size()) {
    throw ValidationError("sample " + sample.patient_id + ": diagnosis and lab histories must be non-empty and aligned");
  }
  if (sample.label.size() != model.task_dim()) {
    throw ValidationError("sample " + sample.patient_id + ": label size does not match the task output");
  }
  PreparedSample p;
  p.history_diag.reserve(sample.history_diag.size());
  for (const auto& v : sample.history_diag) {
    if (v.size() != model.n_diag()) throw ValidationError("sample " + sample.patient_id + ": diagnosis vector size mismatch");
    p.history_diag.push_back(nn::to_vector(v));
  }
  if (model.lab_module) {
    const auto x_lab = pretrain::integrate(sample.history_lab);
    if (x_lab.size() != model.lab_module->lab_dim()) {
      throw ValidationError("sample " + sample.patient_id + ": lab vector size does not match the lab module");
    }
    p.h_lab = pretrain::encode_lab(*model.lab_module, x_lab);
  }
  p.label = nn::to_vector(sample.label);
  return p;
}

std::vector<PreparedSample> prepare_samples(const FusedModel& model, std::span<const ehr::TaskSample> samples) {
  std::vector<PreparedSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(prepare_sample(model, s));
  return out;
}

namespace {

nn::Vector concat(const nn::Vector& o, const nn::Vector& h_lab) {
  nn::Vector out(o.size() + h_lab.size());
  out << o, h_lab;
  return out;
}

}  // namespace

nn::Vector fused_representation(const FusedModel& model, const PreparedSample& sample) {
  return concat(backbone::backbone_forward(model.backbone, sample.history_diag), sample.h_lab);
}

nn::Vector fuse_forward(const FusedModel& model, const PreparedSample& sample, bool training, nn::Rng& rng) {
  const nn::Vector fused = fused_representation(model, sample);
  if (!training) return nn::dense_apply(model.classifier, fused);
  return nn::dense_apply(model.classifier, nn::dropout_forward(fused, model.dropout_rate, rng, true).output);
}

nn::Vector fuse_forward(const FusedModel& model, std::span<const ehr::MultiHot> history_diag,
                        std::span<const ehr::MultiHot> history_lab, bool training, nn::Rng& rng) {
  ehr::TaskSample s;
  s.task = model.task;
  s.history_diag.assign(history_diag.begin(), history_diag.end());
  s.history_lab.assign(history_lab.begin(), history_lab.end());
  s.label = ehr::MultiHot(model.task_dim());
  return fuse_forward(model, prepare_sample(model, s), training, rng);
}

FusedGradients zero_gradients(const FusedModel& model) {
  return FusedGradients{backbone::zeros_like(model.backbone), nn::zeros_like(model.classifier)};
}

std::vector<nn::ParamBlock> parameters(FusedGradients& grads) {
  auto blocks = backbone::parameters(grads.backbone, "backbone");
  auto head = nn::parameters(grads.classifier, "classifier");
  blocks.insert(blocks.end(), head.begin(), head.end());
  return blocks;
}

double accumulate_gradients(const FusedModel& model, const PreparedSample& sample, bool training, nn::Rng& rng,
                            double scale, FusedGradients& grads) {
  const auto bb = backbone::backbone_forward_cached(model.backbone, sample.history_diag);
  const nn::Vector fused = concat(bb.output, sample.h_lab);
  nn::DropoutForward drop;
  if (training) {
    drop = nn::dropout_forward(fused, model.dropout_rate, rng, true);
  } else {
    drop.output = fused;
  }
  const auto head = nn::dense_forward(model.classifier, drop.output);
  const auto loss = nn::bce_loss(head.output, sample.label);
  nn::Vector d_fused = nn::dense_backward_accumulate(model.classifier, head.cache, loss.grad * scale, grads.classifier);
  if (training) d_fused = nn::dropout_backward(drop.mask, model.dropout_rate, d_fused);
  // The lab part of the gradient stops here: the lab module is frozen.
  const nn::Vector d_o = d_fused.head(bb.output.size());
  backbone::backbone_backward_accumulate(model.backbone, bb.cache, d_o, grads.backbone);
  return loss.loss;
}

double mean_loss(const FusedModel& model, std::span<const PreparedSample> samples) {
  if (samples.empty()) return std::nan("");
  double total = 0.0;
  nn::Rng unused(0);
  for (const auto& s : samples) total += nn::bce_loss(fuse_forward(model, s, false, unused), s.label).loss;
  return total / static_cast<double>(samples.size());
}

std::vector<double> predict_scores(const FusedModel& model, const ehr::TaskSample& sample) {
  nn::Rng unused(0);
  return nn::to_std(fuse_forward(model, prepare_sample(model, sample), false, unused));
}

std::vector<std::vector<double>> predict_scores(const FusedModel& model, std::span<const ehr::TaskSample> samples) {
  const auto prepared = prepare_samples(model, samples);
  return predict_prepared(model, prepared);
}

std::vector<std::vector<double>> predict_prepared(const FusedModel& model, std::span<const PreparedSample> samples) {
  std::vector<std::vector<double>> out;
  out.reserve(samples.size());
  nn::Rng unused(0);
  for (const auto& s : samples) out.push_back(nn::to_std(fuse_forward(model, s, false, unused)));
  return out;
}

}  // namespace mplite::fusion
