// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"
#include "mplite/common/hash.hpp"
#include "mplite/pipeline/commands.hpp"
#include "mplite/pipeline/config.hpp"
#include "mplite/pipeline/parallel.hpp"
#include "test_support.hpp"

namespace mplite::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json tiny_config(const fs::path& out_dir) {
  return json{
      {"version", 1},
      {"out_dir", out_dir.string()},
      {"synth",
       {{"seed", 4}, {"n_diag", 12}, {"n_lab", 16}, {"n_patients", 240}, {"single_visit_fraction", 0.5},
        {"lab_flip_rate", 0.05}, {"persistence", 0.8}, {"onset_rate", 0.2}, {"miss_rate", 0.1}}},
      {"split", {{"train", 0.8}, {"val", 0.1}, {"test", 0.1}, {"seed", 0}}},
      {"pretrain", {{"hidden", 16}, {"epochs", 4}, {"batch_size", 32}}},
      {"downstream", {{"gru_hidden", 8}, {"epochs", 3}, {"batch_size", 32}}},
      {"task", "both"},
      {"n_runs", 2},
      {"eval", {{"ks", {5, 10}}}},
  };
}

ExperimentConfig parse(const json& j) { return parse_config(j.dump()); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) out[fs::relative(entry.path(), dir).string()] = sha256_file(entry.path());
  }
  return out;
}

void run_all(const ExperimentConfig& c) {
  cmd_synth(c);
  cmd_ingest(c);
  cmd_pretrain(c);
  cmd_train(c);
  cmd_eval(c);
  cmd_report(c);
}

TEST(Config, Defaults) {
  const auto c = parse(json{{"version", 1}, {"out_dir", "/tmp/x"}, {"synth", json::object()}});
  EXPECT_EQ(c.n_runs, 10u);
  EXPECT_EQ(c.seeds, consecutive_seeds(1, 10));
  EXPECT_EQ(c.pretrain.hidden, 200u);
  EXPECT_EQ(c.pretrain.epochs, 100);
  EXPECT_EQ(c.downstream.gru_hidden, 128u);
  EXPECT_EQ(c.downstream.dropout, 0.4);
  EXPECT_EQ(c.downstream.batch_size, 64u);
  EXPECT_EQ(c.downstream.lr.start, 1e-2);
  EXPECT_EQ(c.downstream.lr.end, 1e-5);
  EXPECT_EQ(c.tasks.size(), 2u);
  EXPECT_EQ(c.resolved_data_dir(), fs::path("/tmp/x") / "data");
}

TEST(Config, RejectsBadInput) {
  testing::TempDir dir;
  const auto base = tiny_config(dir.path());
  EXPECT_THROW(parse_config("{"), ValidationError);
  auto j = base;
  j["bogus"] = 1;
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["pretrain"]["hiden"] = 3;
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["version"] = 2;
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j.erase("version");
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["synth"]["lab_flip_rate"] = 1.5;
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["seeds"] = {1, 2, 3};
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["seeds"] = {4, 4};
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["split"]["train"] = 0.9;
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["downstream"]["epochs"] = 1;
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["task"] = "mortality";
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j["n_runs"] = "two";
  EXPECT_THROW(parse(j), ValidationError);
  j = base;
  j.erase("synth");
  EXPECT_THROW(parse(j), ValidationError);
  EXPECT_THROW(load_config(dir.path() / "missing.json"), ValidationError);
}

TEST(Parallel, RunsEveryIndexOnce) {
  for (std::size_t threads : {1u, 3u, 16u}) {
    std::vector<std::atomic<int>> hits(37);
    parallel_for(37, threads, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  try {
    parallel_for(10, 4, [](std::size_t i) {
      if (i == 3 || i == 7) throw std::runtime_error("index " + std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "index 3");
  }
}

TEST(Pipeline, EndToEndArtifactsAndManifests) {
  testing::TempDir dir;
  const auto c = parse(tiny_config(dir.path()));
  const auto layout = layout_for(c);
  run_all(c);

  const auto manifest = json::parse(read_file(layout.ingest_manifest()));
  EXPECT_EQ(manifest.at("patients_total").get<int>(), 240);
  EXPECT_EQ(manifest.at("patients_single").get<int>(), 120);
  EXPECT_EQ(manifest.at("n_diag_codes").get<int>(), 12);
  EXPECT_TRUE(fs::exists(layout.split_file()));
  EXPECT_TRUE(fs::exists(layout.lab_module()));
  for (auto mode : {fusion::Mode::baseline, fusion::Mode::mplite}) {
    for (auto task : {ehr::Task::dg, ehr::Task::hf}) {
      for (std::uint64_t seed : {1u, 2u}) EXPECT_TRUE(fs::exists(layout.experiment(mode, task, seed)));
      EXPECT_TRUE(fs::exists(layout.metrics_json(mode, task)));
    }
  }
  const auto report = read_file(layout.report_text());
  EXPECT_NE(report.find("GRU+MPLite"), std::string::npos) << report;
  EXPECT_NE(report.find("DG w-F1"), std::string::npos) << report;
  EXPECT_NE(report.find("HF AUC"), std::string::npos) << report;
  EXPECT_NE(report.find("Delta"), std::string::npos) << report;
}

TEST(Pipeline, RerunsAreByteIdentical) {
  testing::TempDir dir;
  const auto c = parse(tiny_config(dir.path()));
  run_all(c);
  const auto first = snapshot(dir.path());
  run_all(c);
  EXPECT_EQ(snapshot(dir.path()), first);
  fs::remove_all(dir.path() / "train");
  fs::remove_all(dir.path() / "pretrain");
  run_all(c);
  EXPECT_EQ(snapshot(dir.path()), first);
}

TEST(Pipeline, ThreadCountDoesNotChangeResults) {
  testing::TempDir a, b;
  auto ja = tiny_config(a.path());
  auto jb = tiny_config(b.path());
  jb["threads"] = 3;
  const auto ca = parse(ja);
  const auto cb = parse(jb);
  run_all(ca);
  run_all(cb);
  EXPECT_EQ(read_file(layout_for(ca).report_json()), read_file(layout_for(cb).report_json()));
  EXPECT_EQ(sha256_file(layout_for(ca).experiment(fusion::Mode::mplite, ehr::Task::hf, 2)),
            sha256_file(layout_for(cb).experiment(fusion::Mode::mplite, ehr::Task::hf, 2)));
}

TEST(Pipeline, OrderingErrors) {
  testing::TempDir dir;
  const auto c = parse(tiny_config(dir.path()));
  EXPECT_THROW(cmd_ingest(c), ValidationError);
  cmd_synth(c);
  cmd_ingest(c);
  CommandOptions opts;
  opts.mode = fusion::Mode::mplite;
  try {
    cmd_train(c, opts);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("pretrain"), std::string::npos) << e.what();
  }
  EXPECT_THROW(cmd_eval(c), ValidationError);
}

TEST(Pipeline, SeedOverrideChangesSynthOnly) {
  testing::TempDir dir;
  const auto c = parse(tiny_config(dir.path()));
  const auto data = c.resolved_data_dir();
  cmd_synth(c);
  const auto base = read_file(data / "labevents.csv");
  CommandOptions opts;
  opts.seed = 99;
  cmd_synth(c, opts);
  EXPECT_NE(read_file(data / "labevents.csv"), base);
  cmd_synth(c);
  EXPECT_EQ(read_file(data / "labevents.csv"), base);
}

}  // namespace
}  // namespace mplite::pipeline
