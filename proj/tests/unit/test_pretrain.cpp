// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "grad_probes.hpp"
#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"
#include "mplite/ehr/cohort.hpp"
#include "mplite/ehr/dataset.hpp"
#include "mplite/ehr/synth.hpp"
#include "mplite/pretrain/checkpoint.hpp"
#include "mplite/pretrain/integrate.hpp"
#include "mplite/pretrain/lab_module.hpp"
#include "mplite/pretrain/train.hpp"
#include "test_support.hpp"

namespace mplite::pretrain {
namespace {

using ehr::MultiHot;
using testing::numbered_vocab;

MultiHot bits(std::initializer_list<int> v) {
  MultiHot m(v.size());
  std::size_t i = 0;
  for (int b : v) m.set(i++, b != 0);
  return m;
}

TEST(Integrate, SingletonAndOr) {
  const auto v = bits({0, 1, 1, 0});
  EXPECT_EQ(integrate(std::vector<MultiHot>{v}), v);
  EXPECT_EQ(integrate(std::vector<MultiHot>{bits({1, 0, 1}), bits({0, 0, 1})}), bits({1, 0, 1}));
  EXPECT_THROW(integrate(std::vector<MultiHot>{}), std::invalid_argument);
  EXPECT_THROW(integrate(std::vector<MultiHot>{MultiHot(2), MultiHot(3)}), std::invalid_argument);
}

TEST(Integrate, MatchesPerBitScan) {
  nn::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MultiHot> vs;
    for (int i = 0; i < 5; ++i) vs.push_back(testing::random_multi_hot(rng, 12, 0.2));
    const auto got = integrate(vs);
    for (std::size_t b = 0; b < 12; ++b) {
      bool any = false;
      for (const auto& v : vs) any = any || v.test(b);
      EXPECT_EQ(got.test(b), any);
    }
  }
}

class PretrainData : public ::testing::Test {
 protected:
  void SetUp() override {
    ehr::GenConfig c;
    c.n_diag = 8;
    c.n_lab = 24;
    c.n_patients = 300;
    c.labs_per_disease = 3;
    c.unique_labs = true;
    c.max_conditions = 2;
    const auto synth = ehr::synth_generate(c, 13);
    data = ehr::build_dataset(synth.admissions, synth.diagnoses, synth.labevents);
    split = ehr::split_dataset(data.cohorts.prediction, {}, 1);
    samples = build_pretrain_set(data, split.train, &stats);
  }
  PretrainConfig quick(int epochs) const {
    PretrainConfig cfg;
    cfg.hidden = 16;
    cfg.batch_size = 16;
    cfg.epochs = epochs;
    return cfg;
  }
  ehr::Dataset data;
  ehr::DatasetSplit split;
  PretrainSetStats stats;
  std::vector<PretrainSample> samples;
};

TEST_F(PretrainData, SetExcludesHeldOutMultiVisitPatients) {
  std::set<std::string> ids;
  for (const auto& s : samples) ids.insert(s.patient_id);
  for (const auto* part : {&split.val, &split.test}) {
    for (const auto& id : *part) EXPECT_FALSE(ids.count(id)) << id;
  }
  std::size_t singles = 0;
  for (const auto& p : data.patients) {
    if (p.visit_count() == 1 && p.lab_event_count > 0) {
      EXPECT_TRUE(ids.count(p.patient_id));
      ++singles;
    }
  }
  EXPECT_EQ(stats.single_visit, singles);
  EXPECT_EQ(stats.multi_visit, split.train.size());
  EXPECT_EQ(stats.excluded_multi_visit, split.val.size() + split.test.size());
  EXPECT_EQ(samples.size(), stats.single_visit + stats.multi_visit);
}

TEST_F(PretrainData, TargetIsUnionAndInputIsIntegrated) {
  for (const auto& s : samples) {
    const auto& p = data.patient(s.patient_id);
    for (const auto& v : p.visits) {
      for (const auto& code : v.diag_codes) EXPECT_TRUE(s.y.test(*data.diag_vocab.index_of(code)));
      for (const auto& code : v.lab_abnormal) EXPECT_TRUE(s.x_lab.test(*data.lab_vocab.index_of(code)));
    }
  }
}

TEST(PretrainSet, EmptyTargetsDroppedWithCounter) {
  const std::vector<ehr::AdmissionEvent> adm{{"A", "V1", 1, 0}, {"B", "V2", 1, 0}};
  const std::vector<ehr::DiagnosisEvent> dx{{"A", "V1", "d", 0}};
  const std::vector<ehr::LabEvent> labs{{"A", "V1", "l", true, 0, 0}, {"B", "V2", "l", true, 0, 0}};
  const auto ds = ehr::build_dataset(adm, dx, labs);
  PretrainSetStats stats;
  const auto set = build_pretrain_set(ds, {}, &stats);
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set[0].patient_id, "A");
  EXPECT_EQ(stats.dropped_empty_target, 1u);

  const std::vector<ehr::LabEvent> only_b{{"B", "V2", "l", true, 0, 0}};
  EXPECT_THROW(build_pretrain_set(ehr::build_dataset(adm, dx, only_b), {}), ValidationError);
}

TEST(LabModule, ZeroWeightsGiveHalf) {
  nn::Rng rng(1);
  const auto lab = numbered_vocab(ehr::VocabKind::lab, 5, "L");
  const auto diag = numbered_vocab(ehr::VocabKind::diagnosis, 7, "D");
  auto m = make_lab_module(lab, diag, 200, nn::Activation::relu, rng);
  m.encoder = nn::zeros_like(m.encoder);
  m.decoder = nn::zeros_like(m.decoder);
  const auto out = pretrain_forward(m, MultiHot(5), lab, diag);
  EXPECT_EQ(out.h_lab.size(), 200);
  EXPECT_EQ(out.y_hat.size(), 7);
  for (Eigen::Index i = 0; i < 7; ++i) EXPECT_EQ(out.y_hat[i], 0.5);
}

TEST(LabModule, ForwardIsComposedDenseLayers) {
  nn::Rng rng(2);
  const auto lab = numbered_vocab(ehr::VocabKind::lab, 6, "L");
  const auto diag = numbered_vocab(ehr::VocabKind::diagnosis, 4, "D");
  auto m = make_lab_module(lab, diag, 8, nn::Activation::relu, rng);
  testing::randomize(m.encoder.bias, rng, 0.5);
  const auto x = testing::random_multi_hot(rng, 6, 0.5);
  std::vector<double> xs(6);
  for (std::size_t i = 0; i < 6; ++i) xs[i] = x.test(i) ? 1.0 : 0.0;
  const auto h = testing::dense_oracle(m.encoder, xs);
  const auto y = testing::dense_oracle(m.decoder, h);
  const auto out = pretrain_forward(m, x, lab, diag);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(out.h_lab[static_cast<Eigen::Index>(i)], h[i], 1e-12);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(out.y_hat[static_cast<Eigen::Index>(i)], y[i], 1e-12);
    EXPECT_GT(out.y_hat[static_cast<Eigen::Index>(i)], 0.0);
    EXPECT_LT(out.y_hat[static_cast<Eigen::Index>(i)], 1.0);
  }
}

TEST(LabModule, FingerprintMismatchRejected) {
  nn::Rng rng(3);
  const auto lab = numbered_vocab(ehr::VocabKind::lab, 4, "L");
  const auto diag = numbered_vocab(ehr::VocabKind::diagnosis, 4, "D");
  const auto other = numbered_vocab(ehr::VocabKind::lab, 4, "X");
  const auto m = make_lab_module(lab, diag, 3, nn::Activation::relu, rng);
  EXPECT_THROW(pretrain_forward(m, MultiHot(4), other, diag), ValidationError);
  EXPECT_THROW(check_vocabularies(m, lab, numbered_vocab(ehr::VocabKind::diagnosis, 4, "Y")), ValidationError);
}

TEST(LabModule, EncodeRequiresFrozenModule) {
  nn::Rng rng(4);
  const auto lab = numbered_vocab(ehr::VocabKind::lab, 4, "L");
  const auto diag = numbered_vocab(ehr::VocabKind::diagnosis, 3, "D");
  auto m = make_lab_module(lab, diag, 5, nn::Activation::relu, rng);
  const auto x = testing::random_multi_hot(rng, 4, 0.5);
  EXPECT_THROW(encode_lab(m, x), std::logic_error);
  m.frozen = true;
  const auto a = encode_lab(m, x);
  EXPECT_EQ(a, encode_lab(m, x));
  EXPECT_EQ(a, pretrain_forward(m, nn::to_vector(x)).h_lab);
}

TEST(LabModule, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) EXPECT_LE(testing::pretrain_probe(seed), 1e-4) << seed;
}

TEST_F(PretrainData, LossDecreasesOverFirstEpochs) {
  auto cfg = quick(20);
  cfg.holdout_fraction = 0.0;
  nn::Rng rng(7);
  const auto result = train_pretrain(samples, data.lab_vocab, data.diag_vocab, cfg, rng);
  ASSERT_EQ(result.history.size(), 20u);
  for (std::size_t e = 1; e < 5; ++e) EXPECT_LT(result.history[e].train_loss, result.history[e - 1].train_loss);
  EXPECT_TRUE(std::isnan(result.history[0].holdout_loss));
  EXPECT_TRUE(result.module.frozen);
  EXPECT_EQ(result.best_epoch, 19);
}

TEST_F(PretrainData, MemorizesSingleSample) {
  std::vector<PretrainSample> one{samples.front()};
  PretrainConfig cfg;  // default capacity, h = 200
  cfg.epochs = 200;
  cfg.holdout_fraction = 0.0;
  nn::Rng rng(3);
  const auto result = train_pretrain(one, data.lab_vocab, data.diag_vocab, cfg, rng);
  EXPECT_LT(result.history.back().train_loss, 0.01);
}

TEST_F(PretrainData, SameSeedByteIdenticalWeights) {
  const auto cfg = quick(6);
  nn::Rng a(11), b(11), c(12);
  const auto ra = train_pretrain(samples, data.lab_vocab, data.diag_vocab, cfg, a);
  const auto rb = train_pretrain(samples, data.lab_vocab, data.diag_vocab, cfg, b);
  const auto rc = train_pretrain(samples, data.lab_vocab, data.diag_vocab, cfg, c);
  EXPECT_EQ(module_to_json(ra.module), module_to_json(rb.module));
  EXPECT_NE(weight_checksum(ra.module), weight_checksum(rc.module));
}

TEST_F(PretrainData, EarlyStoppingRestoresBestHoldoutWeights) {
  auto cfg = quick(60);
  cfg.hidden = 64;
  cfg.patience = 2;
  nn::Rng rng(5);
  const auto result = train_pretrain(samples, data.lab_vocab, data.diag_vocab, cfg, rng);
  double best = INFINITY;
  int best_epoch = -1;
  for (const auto& e : result.history) {
    if (e.holdout_loss < best) {
      best = e.holdout_loss;
      best_epoch = e.epoch;
    }
  }
  EXPECT_EQ(result.best_epoch, best_epoch);
  EXPECT_LE(static_cast<int>(result.history.size()), cfg.epochs);
  EXPECT_EQ(static_cast<int>(result.history.size()) - 1 - result.best_epoch <= cfg.patience, true);
}

TEST_F(PretrainData, EncodeLeavesChecksumUnchanged) {
  nn::Rng rng(8);
  const auto result = train_pretrain(samples, data.lab_vocab, data.diag_vocab, quick(3), rng);
  const auto before = weight_checksum(result.module);
  for (const auto& s : samples) (void)encode_lab(result.module, s.x_lab);
  EXPECT_EQ(weight_checksum(result.module), before);
}

TEST(PretrainConfig, Validation) {
  PretrainConfig c;
  EXPECT_NO_THROW(validate(c));
  c.epochs = 1;
  EXPECT_THROW(validate(c), ValidationError);
  c = {};
  c.holdout_fraction = 1.0;
  EXPECT_THROW(validate(c), ValidationError);
  c = {};
  c.hidden = 0;
  EXPECT_THROW(validate(c), ValidationError);
}

TEST(Checkpoint, RoundTripBitwise) {
  testing::TempDir dir;
  nn::Rng rng(6);
  const auto lab = numbered_vocab(ehr::VocabKind::lab, 9, "L");
  const auto diag = numbered_vocab(ehr::VocabKind::diagnosis, 5, "D");
  auto m = make_lab_module(lab, diag, 7, nn::Activation::tanh, rng);
  testing::randomize(m.encoder.bias, rng);
  EXPECT_THROW(save_module(m, dir.path() / "m.json"), std::logic_error);
  m.frozen = true;
  m.seed = 77;
  save_module(m, dir.path() / "m.json");
  const auto back = load_module(dir.path() / "m.json", lab, diag);
  EXPECT_TRUE(back.frozen);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.encoder.activation, nn::Activation::tanh);
  EXPECT_EQ(back.encoder.weight, m.encoder.weight);
  EXPECT_EQ(back.encoder.bias, m.encoder.bias);
  EXPECT_EQ(back.decoder.weight, m.decoder.weight);
  EXPECT_EQ(weight_checksum(back), weight_checksum(m));
  EXPECT_EQ(module_to_json(back), read_file(dir.path() / "m.json"));

  EXPECT_THROW(load_module(dir.path() / "m.json", numbered_vocab(ehr::VocabKind::lab, 9, "Q"), diag),
               ValidationError);
  const auto text = read_file(dir.path() / "m.json");
  write_file_atomic(dir.path() / "cut.json", text.substr(0, text.size() / 2));
  EXPECT_THROW(load_module(dir.path() / "cut.json"), DataError);
  write_file_atomic(dir.path() / "other.json", R"({"format":"something-else"})");
  EXPECT_THROW(load_module(dir.path() / "other.json"), DataError);
}

}  // namespace
}  // namespace mplite::pretrain
