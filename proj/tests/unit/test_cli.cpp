// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "mplite/common/files.hpp"
#include "test_support.hpp"

namespace mplite {
namespace {

namespace fs = std::filesystem;

// Runs the CLI with stdout/stderr captured to `log`; returns the exit code.
int run_cli(const std::string& args, const fs::path& log, const std::string& env = "") {
  const std::string cmd = env + " " + MPLITE_CLI_PATH + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tiny_config(const fs::path& out_dir) {
  return R"({"version": 1, "out_dir": ")" + out_dir.string() + R"(",
  "synth": {"seed": 2, "n_diag": 10, "n_lab": 12, "n_patients": 160, "persistence": 0.8, "onset_rate": 0.2},
  "pretrain": {"hidden": 8, "epochs": 3}, "downstream": {"gru_hidden": 6, "epochs": 2},
  "n_runs": 2, "eval": {"ks": [5]}})";
}

class Cli : public ::testing::Test {
 protected:
  testing::TempDir dir;
  fs::path log() const { return dir.path() / "log.txt"; }
  std::string output() const { return read_file(log()); }
  fs::path write_config(const std::string& text) const {
    const auto path = dir.path() / "cfg.json";
    write_file_atomic(path, text);
    return path;
  }
};

TEST_F(Cli, HelpSucceeds) {
  EXPECT_EQ(run_cli("--help", log()), 0);
  EXPECT_NE(output().find("pretrain"), std::string::npos);
}

TEST_F(Cli, UsageErrorsAreValidationErrors) {
  EXPECT_EQ(run_cli("", log()), 1);
  EXPECT_EQ(run_cli("synth", log()), 1);
  EXPECT_EQ(run_cli("frobnicate --config x", log()), 1);
  EXPECT_EQ(run_cli("synth --config " + (dir.path() / "none.json").string(), log()), 1);
  const auto cfg = write_config(tiny_config(dir.path() / "out"));
  EXPECT_EQ(run_cli("train --config " + cfg.string() + " --task xx", log()), 1);
  EXPECT_EQ(run_cli("train --config " + cfg.string() + " --mode other", log()), 1);
}

TEST_F(Cli, InvalidProbabilityIsValidationError) {
  auto text = tiny_config(dir.path() / "out");
  text.replace(text.find("\"persistence\": 0.8"), 18, "\"lab_flip_rate\": 1.5");
  const auto cfg = write_config(text);
  EXPECT_EQ(run_cli("synth --config " + cfg.string(), log()), 1);
  EXPECT_NE(output().find("lab_flip_rate"), std::string::npos) << output();
}

TEST_F(Cli, MissingCheckpointIsValidationError) {
  const auto cfg = write_config(tiny_config(dir.path() / "out"));
  ASSERT_EQ(run_cli("synth --config " + cfg.string(), log()), 0) << output();
  ASSERT_EQ(run_cli("ingest --config " + cfg.string(), log()), 0) << output();
  EXPECT_EQ(run_cli("train --config " + cfg.string() + " --mode mplite", log()), 1);
  EXPECT_NE(output().find("pretrain"), std::string::npos) << output();
}

TEST_F(Cli, UnwritableOutputIsRuntimeError) {
  write_file_atomic(dir.path() / "plain", "x");
  const auto cfg = write_config(tiny_config(dir.path() / "plain" / "out"));
  EXPECT_EQ(run_cli("synth --config " + cfg.string(), log()), 2);
}

TEST_F(Cli, FullRunAndLogLevels) {
  const auto out = dir.path() / "out";
  const auto cfg = write_config(tiny_config(out)).string();
  for (const char* cmd : {"synth", "ingest", "pretrain", "train", "eval"}) {
    ASSERT_EQ(run_cli(std::string(cmd) + " --config " + cfg, log(), "MPLITE_LOG=error"), 0) << cmd << output();
  }
  ASSERT_EQ(run_cli("report --config " + cfg, log(), "MPLITE_LOG=error"), 0) << output();
  EXPECT_NE(output().find("GRU+MPLite"), std::string::npos) << output();
  EXPECT_EQ(output().find("[info]"), std::string::npos);
  ASSERT_EQ(run_cli("eval --config " + cfg + " --task hf --mode baseline --seed 5", log(), "MPLITE_LOG=debug"), 1)
      << output();  // seed 5 was never trained
  ASSERT_EQ(run_cli("ingest --config " + cfg, log(), "MPLITE_LOG=info"), 0);
  EXPECT_NE(output().find("[info]"), std::string::npos) << output();
}

}  // namespace
}  // namespace mplite
