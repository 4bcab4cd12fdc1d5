// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mplite/common/error.hpp"
#include "mplite/metrics/metrics.hpp"
#include "mplite/metrics/report.hpp"
#include "test_support.hpp"

namespace mplite::metrics {
namespace {

using ehr::MultiHot;

MultiHot ones_at(std::size_t n, std::vector<std::size_t> idx) { return MultiHot::from_indices(n, idx); }

// Scores on a coarse grid so ties occur often.
std::vector<double> grid_scores(nn::Rng& rng, std::size_t n) {
  std::vector<double> s(n);
  for (auto& v : s) v = static_cast<double>(rng.below(8)) / 8.0;
  return s;
}

TEST(Recall, PerfectRankingAndFullCoverage) {
  const std::vector<double> s{0.9, 0.1, 0.8, 0.2};
  EXPECT_EQ(recall_at_k(s, ones_at(4, {0, 2}), 2), 1.0);
  const std::vector<double> uniform(10, 0.5);
  EXPECT_EQ(recall_at_k(uniform, ones_at(10, {3, 7}), 10), 1.0);
  EXPECT_EQ(recall_at_k(s, ones_at(4, {1}), 1), 0.0);
}

TEST(Recall, ErrorsAndCapping) {
  const std::vector<double> s{0.9, 0.1, 0.8};
  EXPECT_THROW(recall_at_k(s, MultiHot(4), 2), std::invalid_argument);
  EXPECT_THROW(recall_at_k(s, MultiHot(3), 2), ValidationError);
  EXPECT_EQ(recall_at_k(s, ones_at(3, {0, 1, 2}), 1), 1.0 / 3.0);
  EXPECT_EQ(recall_at_k(s, ones_at(3, {0, 1, 2}), 1, true), 1.0);
}

TEST(Recall, MatchesSortOracle) {
  nn::Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    const auto scores = grid_scores(rng, n);
    auto truth = testing::random_multi_hot(rng, n, 0.3);
    truth.set(rng.below(n));
    const std::size_t k = 1 + rng.below(n + 3);
    EXPECT_EQ(recall_at_k(scores, truth, k), testing::recall_oracle(scores, truth, k));
  }
}

TEST(Recall, MonotoneInK) {
  nn::Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto scores = grid_scores(rng, 25);
    auto truth = testing::random_multi_hot(rng, 25, 0.2);
    truth.set(0);
    for (std::size_t k = 2; k <= 25; ++k) EXPECT_LE(recall_at_k(scores, truth, k - 1), recall_at_k(scores, truth, k));
  }
}

TEST(Recall, MeanSkipsEmptyTruth) {
  const std::vector<std::vector<double>> s{{0.9, 0.1}, {0.2, 0.8}, {0.5, 0.5}};
  const std::vector<MultiHot> t{ones_at(2, {0}), ones_at(2, {0}), MultiHot(2)};
  std::size_t skipped = 0;
  EXPECT_EQ(mean_recall_at_k(s, t, 1, false, &skipped), 0.5);
  EXPECT_EQ(skipped, 1u);
}

TEST(WeightedF1, PerfectAndClosedForm) {
  const std::vector<std::vector<double>> s{{1.0, 0.0}, {0.0, 1.0}};
  EXPECT_EQ(weighted_f1(s, {ones_at(2, {0}), ones_at(2, {1})}), 1.0);
  // One label, TP=1 FP=1 FN=1: precision = recall = 1/2, so F1 = 1/2.
  const std::vector<std::vector<double>> s1{{0.9}, {0.8}, {0.1}};
  const std::vector<MultiHot> t1{ones_at(1, {0}), MultiHot(1), ones_at(1, {0})};
  EXPECT_NEAR(weighted_f1(s1, t1), 0.5, 1e-15);
  EXPECT_NEAR(weighted_f1(s1, t1), testing::weighted_f1_oracle(s1, t1, 0.5), 1e-15);
  // One label, TP=2 FP=1 FN=1 gives 2/3.
  const std::vector<std::vector<double>> s2{{0.9}, {0.9}, {0.8}, {0.1}};
  const std::vector<MultiHot> t2{ones_at(1, {0}), ones_at(1, {0}), MultiHot(1), ones_at(1, {0})};
  EXPECT_NEAR(weighted_f1(s2, t2), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(weighted_f1(s1, {MultiHot(1), MultiHot(1), MultiHot(1)}), ValidationError);
}

TEST(WeightedF1, MatchesConfusionOracle) {
  nn::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    const std::size_t labels = 1 + rng.below(30);
    std::vector<std::vector<double>> scores;
    std::vector<MultiHot> truth;
    for (std::size_t i = 0; i < n; ++i) {
      scores.push_back(grid_scores(rng, labels));
      truth.push_back(testing::random_multi_hot(rng, labels, 0.3));
    }
    truth[0].set(rng.below(labels));
    EXPECT_NEAR(weighted_f1(scores, truth, 0.5), testing::weighted_f1_oracle(scores, truth, 0.5), 1e-12);
  }
}

TEST(Auc, ClosedForms) {
  const std::vector<std::uint8_t> y{0, 0, 1, 1};
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, y), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, y), 0.0);
  EXPECT_EQ(roc_auc(std::vector<double>(4, 0.3), y), 0.5);
  EXPECT_THROW(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<std::uint8_t>{1, 1}), ValidationError);
  EXPECT_THROW(roc_auc(std::vector<double>{0.1}, std::vector<std::uint8_t>{1, 0}), std::invalid_argument);
}

TEST(Auc, MatchesAllPairsOracle) {
  nn::Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const auto scores = grid_scores(rng, n);
    std::vector<std::uint8_t> labels(n);
    for (auto& l : labels) l = rng.bernoulli(0.4) ? 1 : 0;
    labels[0] = 1;
    labels[1] = 0;
    EXPECT_NEAR(roc_auc(scores, labels), testing::auc_oracle(scores, labels), 1e-12);
  }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  nn::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto scores = grid_scores(rng, 20);
    std::vector<std::uint8_t> labels(20);
    for (auto& l : labels) l = rng.bernoulli(0.5) ? 1 : 0;
    labels[0] = 1;
    labels[1] = 0;
    std::vector<double> mapped;
    for (double s : scores) mapped.push_back(std::exp(3.0 * s) - 7.0);
    EXPECT_EQ(roc_auc(scores, labels), roc_auc(mapped, labels));
  }
}

TEST(BinaryF1, ClosedFormsAndOracle) {
  EXPECT_EQ(binary_f1(std::vector<double>{0.9, 0.1}, std::vector<std::uint8_t>{1, 0}), 1.0);
  // TP=2, FP=1, FN=1.
  const std::vector<double> s{0.9, 0.8, 0.7, 0.1, 0.2};
  const std::vector<std::uint8_t> y{1, 1, 0, 1, 0};
  EXPECT_NEAR(binary_f1(s, y), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(binary_f1(s, std::vector<std::uint8_t>{1}), std::invalid_argument);
  nn::Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    const auto scores = grid_scores(rng, n);
    std::vector<std::uint8_t> labels(n);
    for (auto& l : labels) l = rng.bernoulli(0.4) ? 1 : 0;
    EXPECT_NEAR(binary_f1(scores, labels), testing::binary_f1_oracle(scores, labels, 0.5), 1e-12);
  }
}

RunMetrics run(std::uint64_t seed, double v) { return RunMetrics{seed, {{"auc", v}, {"f1", v / 2}}}; }

TEST(Aggregate, MeanAndSampleStd) {
  const auto r = aggregate_runs({run(1, 0.2), run(2, 0.4)});
  EXPECT_NEAR(r.summary.at("auc").mean, 0.3, 1e-15);
  EXPECT_NEAR(r.summary.at("auc").std, 0.1414213562, 1e-9);
  EXPECT_EQ(r.n_runs, 2u);
  EXPECT_FALSE(r.single_run());
}

TEST(Aggregate, SingleRunHasZeroStd) {
  const auto r = aggregate_runs({run(3, 0.7)});
  EXPECT_EQ(r.summary.at("auc").std, 0.0);
  EXPECT_TRUE(r.single_run());
  EXPECT_NE(format_report(r).find("single run"), std::string::npos);
}

TEST(Aggregate, OrderDoesNotMatter) {
  const auto a = aggregate_runs({run(1, 0.2), run(2, 0.5), run(3, 0.9)});
  const auto b = aggregate_runs({run(3, 0.9), run(1, 0.2), run(2, 0.5)});
  EXPECT_EQ(a.summary.at("auc").mean, b.summary.at("auc").mean);
  EXPECT_EQ(a.summary.at("auc").std, b.summary.at("auc").std);
  EXPECT_EQ(a.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(Aggregate, RejectsInconsistentRuns) {
  EXPECT_THROW(aggregate_runs({}), ValidationError);
  EXPECT_THROW(aggregate_runs({run(1, 0.2), RunMetrics{2, {{"auc", 0.1}}}}), ValidationError);
}

TEST(Report, JsonRoundTripKeepsNaN) {
  auto r = aggregate_runs({run(1, 0.25), run(2, std::nan(""))});
  r.mode = "mplite";
  r.task = "hf";
  const auto text = report_to_json(r);
  const auto back = report_from_json(text);
  EXPECT_EQ(report_to_json(back), text);
  EXPECT_TRUE(std::isnan(back.summary.at("auc").mean));
  EXPECT_THROW(report_from_json("{"), DataError);
}

TEST(Report, ComparisonTableHasPairedRows) {
  auto base = aggregate_runs({run(1, 0.80), run(2, 0.82)});
  base.mode = "baseline";
  base.task = "hf";
  auto plus = aggregate_runs({run(1, 0.84), run(2, 0.86)});
  plus.mode = "mplite";
  plus.task = "hf";
  const auto table = format_comparison({base, plus});
  EXPECT_NE(table.find("HF AUC"), std::string::npos);
  EXPECT_NE(table.find("GRU+MPLite"), std::string::npos);
  EXPECT_NE(table.find("81.00 (1.41)"), std::string::npos) << table;
  EXPECT_NE(table.find("85.00 (1.41)"), std::string::npos) << table;
  EXPECT_NE(table.find("+4.00"), std::string::npos) << table;
  EXPECT_EQ(display_name("r_at_10"), "R@10");
  EXPECT_EQ(display_name("w_f1"), "w-F1");
}

}  // namespace
}  // namespace mplite::metrics
