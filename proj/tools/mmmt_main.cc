/* Copyright 2026 The MMMT-Sim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// mmmt: run, sweep, validate and score multi-model XR workloads.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmmt/cli.h"

namespace {

struct Flags {
  mmmt::RunConfig run;
  std::string mean = "arithmetic";
  std::string scale = "unit";
  double emax = 0.0;
};

void AddWorkloadFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--suite", f.run.suite_file,
                  "Suite JSON file (default: built-in suite)");
  cmd->add_option("--scenario", f.run.scenarios,
                  "Scenario id (repeatable; default: all)");
}

void AddScoringFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--k", f.run.k, "Real-time score steepness")
      ->capture_default_str();
  cmd->add_option("--emax", f.emax, "Energy upper bound in mJ");
  cmd->add_option("--mean", f.mean, "Overall mean: arithmetic or geometric")
      ->check(CLI::IsMember({"arithmetic", "geometric"}))
      ->capture_default_str();
  cmd->add_option("--scale", f.scale, "Report scale: unit or percent")
      ->check(CLI::IsMember({"unit", "percent"}))
      ->capture_default_str();
  cmd->add_flag("--count-untriggered", f.run.count_untriggered,
                "Count untriggered requests in the QoE denominator");
  cmd->add_option("--out", f.run.out_dir, "Output directory");
}

void AddSystemFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--hw", f.run.hw,
                  "Hardware JSON file or preset:<A-M>:<pes>")
      ->capture_default_str();
  cmd->add_option("--costs", f.run.costs_file,
                  "Cost table JSON (default: synthetic from --hw)");
  cmd->add_option("--policy", f.run.policy,
                  "Scheduler: latency-greedy or round-robin")
      ->capture_default_str();
  cmd->add_option("--duration", f.run.duration_s, "Window length in seconds")
      ->capture_default_str();
  cmd->add_option("--seed", f.run.seed, "Jitter/gate seed")
      ->capture_default_str();
}

// Folds string flags into the typed config. Returns false on bad values.
bool Resolve(Flags& f, CLI::App* cmd) {
  try {
    f.run.mean = mmmt::MeanKindFromString(f.mean);
    f.run.scale = mmmt::ReportScaleFromString(f.scale);
  } catch (const mmmt::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return false;
  }
  if (cmd->count("--emax") > 0) f.run.e_max_mj = f.emax;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-model XR workload simulator and scorer"};
  app.require_subcommand(1);

  Flags run_flags;
  auto* run = app.add_subcommand("run", "Simulate scenarios and score them");
  AddWorkloadFlags(run, run_flags);
  AddSystemFlags(run, run_flags);
  AddScoringFlags(run, run_flags);

  Flags sweep_flags;
  mmmt::SweepConfig sweep_cfg;
  auto* sweep =
      app.add_subcommand("sweep", "Sweep one trigger probability of a scenario");
  AddWorkloadFlags(sweep, sweep_flags);
  AddSystemFlags(sweep, sweep_flags);
  AddScoringFlags(sweep, sweep_flags);
  sweep->add_option("--edge", sweep_cfg.edge, "Edge id, e.g. KD->SR")
      ->required();
  sweep->add_option("--values", sweep_cfg.values, "Probabilities to run")
      ->required()
      ->delimiter(',');

  Flags val_flags;
  bool check_schedules = false;
  auto* validate =
      app.add_subcommand("validate", "Check a suite (and optionally schedules)");
  AddWorkloadFlags(validate, val_flags);
  AddSystemFlags(validate, val_flags);
  validate->add_option("--emax", val_flags.emax, "Energy upper bound in mJ");
  validate->add_flag("--schedules", check_schedules,
                     "Also simulate and validate every schedule");

  Flags score_flags;
  mmmt::ScoreConfig score_cfg;
  auto* score = app.add_subcommand("score", "Score an existing event log");
  AddWorkloadFlags(score, score_flags);
  AddScoringFlags(score, score_flags);
  score->add_option("--log", score_cfg.log_file, "Event log CSV")->required();

  std::string export_out;
  auto* export_suite =
      app.add_subcommand("export-suite", "Write the built-in suite as JSON");
  export_suite->add_option("--out", export_out, "Output file (default: stdout)");

  std::string hw_out;
  std::string preset = "J";
  int pes = 4096;
  auto* export_hw =
      app.add_subcommand("export-hw", "Write an accelerator preset as JSON");
  export_hw->add_option("--preset", preset, "Preset letter A-M")->required();
  export_hw->add_option("--pes", pes, "Total PE count")->capture_default_str();
  export_hw->add_option("--out", hw_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    if (!Resolve(run_flags, run)) return 2;
    return mmmt::CmdRun(run_flags.run, std::cout, std::cerr);
  }
  if (*sweep) {
    if (!Resolve(sweep_flags, sweep)) return 2;
    sweep_cfg.base = sweep_flags.run;
    return mmmt::CmdSweep(sweep_cfg, std::cout, std::cerr);
  }
  if (*validate) {
    if (validate->count("--emax") > 0) val_flags.run.e_max_mj = val_flags.emax;
    return mmmt::CmdValidate(val_flags.run, check_schedules, std::cout,
                             std::cerr);
  }
  if (*score) {
    if (!Resolve(score_flags, score)) return 2;
    score_cfg.base = score_flags.run;
    return mmmt::CmdScore(score_cfg, std::cout, std::cerr);
  }
  if (*export_suite) {
    return mmmt::CmdExportSuite(export_out, std::cout, std::cerr);
  }
  if (*export_hw) {
    if (preset.size() != 1) {
      std::cerr << "error: --preset takes one letter\n";
      return 2;
    }
    return mmmt::CmdExportHardware(preset[0], pes, hw_out, std::cout,
                                   std::cerr);
  }
  return 0;
}
