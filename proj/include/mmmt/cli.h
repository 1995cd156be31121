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

// Experiment orchestration behind the `mmmt` command-line tool. Each Cmd*
// function returns a process exit status and reports diagnostics on `err`.

#ifndef MMMT_CLI_H_
#define MMMT_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmmt/costmodel.h"
#include "mmmt/io.h"
#include "mmmt/runtime.h"
#include "mmmt/scoring.h"
#include "mmmt/workload.h"

namespace mmmt {

struct RunConfig {
  std::string suite_file;              // empty: built-in suite
  std::vector<std::string> scenarios;  // empty: every scenario in the suite
  std::string hw = "preset:J:4096";    // hardware file or preset:<A-M>:<pes>
  std::string costs_file;              // empty: synthetic costs from the hw
  std::optional<double> e_max_mj;      // overrides the cost table header
  std::string policy = "latency-greedy";
  double duration_s = 1.0;
  uint64_t seed = 0;
  double k = 10.0;
  MeanKind mean = MeanKind::kArithmetic;
  ReportScale scale = ReportScale::kUnit;
  bool count_untriggered = false;
  std::string out_dir;  // empty: nothing written to disk

  Json ToJson() const;
};

/// \brief Everything a run needs, parsed and validated.
struct LoadedConfig {
  BenchmarkSuite suite;
  HardwareSystem hw;
  CostTable costs{1.0};
  ScoringConfig scoring;
  std::vector<std::string> scenarios;  // resolved ids, suite order
  Json resolved;                       // embedded in every report
};

// Throws ConfigError with file/field context.
LoadedConfig LoadConfig(const RunConfig& config);

struct ScenarioRun {
  EventLog log;
  ScenarioScore score;
};

// Generates, simulates and scores one scenario. Scores are accumulated by a
// ScoreTracker attached to the simulator as it runs.
ScenarioRun RunScenario(const UsageScenario& scenario, const LoadedConfig& cfg,
                        const RunConfig& run);

// Human-readable RT/EN/ACC/QoE break-down.
std::string FormatSummary(const ScoreReport& report,
                          const std::string& hardware_id);

int CmdRun(const RunConfig& config, std::ostream& out, std::ostream& err);

struct SweepConfig {
  RunConfig base;       // exactly one scenario
  std::string edge;     // "UP->DOWN"
  std::vector<double> values;
};

// One simulation per probability value; writes sweep.csv
// (probability,rt,en,qoe,scenario_score) and point_<i>/report.json.
int CmdSweep(const SweepConfig& config, std::ostream& out, std::ostream& err);

// Workload validation; with a hardware config, also simulates every scenario
// and validates the resulting schedules. Nonzero exit on any violation.
int CmdValidate(const RunConfig& config, bool check_schedules, std::ostream& out,
                std::ostream& err);

struct ScoreConfig {
  RunConfig base;        // suite, scenario (exactly one) and scoring flags
  std::string log_file;  // event log CSV
};

// Recomputes the score report from an event log CSV.
int CmdScore(const ScoreConfig& config, std::ostream& out, std::ostream& err);

// Writes the built-in suite to `out_file` (stdout when empty).
int CmdExportSuite(const std::string& out_file, std::ostream& out,
                   std::ostream& err);

// Writes an accelerator preset (with default synthetic parameters).
int CmdExportHardware(char preset, int total_pes, const std::string& out_file,
                      std::ostream& out, std::ostream& err);

}  // namespace mmmt

#endif  // MMMT_CLI_H_
