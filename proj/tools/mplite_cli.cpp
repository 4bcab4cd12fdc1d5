// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

// mplite: synth | ingest | pretrain | train | eval | report
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mplite/common/error.hpp"
#include "mplite/common/log.hpp"
#include "mplite/pipeline/commands.hpp"
#include "mplite/pipeline/config.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Args {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string task;
  std::string mode;
};

void add_common(CLI::App* cmd, Args& args) {
  cmd->add_option("--config", args.config, "Experiment config (JSON)")->required();
  cmd->add_option("--seed", args.seed, "Seed override for this stage");
  cmd->add_option("--out", args.out, "Output directory (overrides out_dir)");
  cmd->add_option("--task", args.task, "Restrict to one task")->check(CLI::IsMember({"dg", "hf"}));
  cmd->add_option("--mode", args.mode, "Restrict to one mode")->check(CLI::IsMember({"baseline", "mplite"}));
}

int run(const std::string& name, const CLI::App& cmd, const Args& args) {
  using namespace mplite;
  auto config = pipeline::load_config(args.config);
  if (!args.out.empty()) config.out_dir = args.out;
  pipeline::CommandOptions options;
  if (cmd.count("--seed") > 0) options.seed = args.seed;
  if (!args.task.empty()) options.task = ehr::parse_task(args.task);
  if (!args.mode.empty()) options.mode = fusion::parse_mode(args.mode);

  if (name == "synth") {
    pipeline::cmd_synth(config, options);
  } else if (name == "ingest") {
    pipeline::cmd_ingest(config, options);
  } else if (name == "pretrain") {
    pipeline::cmd_pretrain(config, options);
  } else if (name == "train") {
    pipeline::cmd_train(config, options);
  } else if (name == "eval") {
    for (const auto& report : pipeline::cmd_eval(config, options)) std::cout << metrics::format_report(report);
  } else if (name == "report") {
    std::cout << pipeline::cmd_report(config, options);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  mplite::set_log_level(mplite::log_level_from_env());

  CLI::App app{"mplite: lab-result pretraining for next-visit diagnosis prediction"};
  app.require_subcommand(1);
  Args args;
  const char* names[] = {"synth", "ingest", "pretrain", "train", "eval", "report"};
  const char* help[] = {"Generate a planted synthetic dataset",
                        "Load tables, build cohorts and the train/val/test split",
                        "Train and freeze the lab-result module",
                        "Train baseline and/or mplite models for each run seed",
                        "Evaluate trained models on the test split",
                        "Print the baseline vs. mplite comparison table"};
  for (std::size_t i = 0; i < std::size(names); ++i) add_common(app.add_subcommand(names[i], help[i]), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  const CLI::App* cmd = app.get_subcommands().front();
  try {
    return run(cmd->get_name(), *cmd, args);
  } catch (const mplite::ValidationError& e) {
    mplite::log_error(e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    mplite::log_error(e.what());
    return kExitRuntime;
  }
}
