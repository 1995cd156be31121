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

#include "mmmt/cli.h"

#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "mmmt/loadgen.h"

namespace mmmt {

namespace fs = std::filesystem;

Json RunConfig::ToJson() const {
  Json j;
  j["suite"] = suite_file.empty() ? "builtin" : suite_file;
  j["scenarios"] = scenarios;
  j["hw"] = hw;
  j["costs"] = costs_file.empty() ? "synthetic" : costs_file;
  j["e_max_mj"] = e_max_mj ? Json(*e_max_mj) : Json(nullptr);
  j["policy"] = policy;
  j["duration_s"] = duration_s;
  j["seed"] = seed;
  j["k"] = k;
  j["mean"] = ToString(mean);
  j["scale"] = ToString(scale);
  j["count_untriggered"] = count_untriggered;
  return j;
}

namespace {

struct HardwareSource {
  HardwareSystem hw;
  SyntheticCostParams synthetic;
};

HardwareSource LoadHardware(const std::string& spec) {
  constexpr std::string_view kPreset = "preset:";
  if (spec.rfind(kPreset, 0) == 0) {
    // preset:<letter>:<total pes>
    std::string rest = spec.substr(kPreset.size());
    auto colon = rest.find(':');
    if (rest.empty() || (colon != std::string::npos && colon != 1) ||
        (colon == std::string::npos && rest.size() != 1)) {
      throw ConfigError(
          fmt::format("--hw '{}': expected preset:<A-M>[:<pes>]", spec));
    }
    int pes = 4096;
    if (colon != std::string::npos) {
      try {
        pes = std::stoi(rest.substr(colon + 1));
      } catch (const std::logic_error&) {
        throw ConfigError(fmt::format("--hw '{}': bad PE count", spec));
      }
    }
    return {AcceleratorPreset(rest[0], pes), SyntheticCostParams::Defaults()};
  }
  Json j = ReadJsonFile(spec);
  return {HardwareFromJson(j, spec), SyntheticParamsFromJson(j, spec)};
}

}  // namespace

LoadedConfig LoadConfig(const RunConfig& config) {
  LoadedConfig cfg;
  if (config.suite_file.empty()) {
    cfg.suite = BuiltinSuite();
  } else {
    cfg.suite = SuiteFromJson(ReadJsonFile(config.suite_file), config.suite_file);
  }
  if (!(config.duration_s > 0.0)) {
    throw ConfigError(fmt::format("--duration must be > 0, got {}",
                                  config.duration_s));
  }

  if (config.scenarios.empty()) {
    for (const auto& s : cfg.suite.scenarios) cfg.scenarios.push_back(s.id);
  } else {
    for (const auto& id : config.scenarios) {
      cfg.suite.Scenario(id);  // throws on unknown ids
      cfg.scenarios.push_back(id);
    }
  }

  HardwareSource hw = LoadHardware(config.hw);
  cfg.hw = std::move(hw.hw);

  if (config.costs_file.empty()) {
    if (!config.e_max_mj) {
      throw ConfigError("synthetic costs need --emax (the energy upper bound)");
    }
    cfg.costs = SyntheticCostTable(cfg.suite, cfg.hw, hw.synthetic,
                                   *config.e_max_mj);
  } else {
    CostTable table = CostTableFromJson(ReadJsonFile(config.costs_file),
                                        config.costs_file);
    if (config.e_max_mj && *config.e_max_mj != table.e_max_mj()) {
      // Re-anchor on the flag value; Add() re-checks every entry.
      CostTable rebased(*config.e_max_mj);
      for (auto& e : table.Entries()) {
        try {
          rebased.Add(e);
        } catch (const ConfigError& ex) {
          throw ConfigError(fmt::format("{}: {}", config.costs_file, ex.what()));
        }
      }
      table = std::move(rebased);
    }
    cfg.costs = std::move(table);
  }

  cfg.scoring.k = config.k;
  cfg.scoring.e_max_mj = cfg.costs.e_max_mj();
  cfg.scoring.overall_mean = config.mean;
  cfg.scoring.report_scale = config.scale;
  cfg.scoring.count_untriggered_in_total = config.count_untriggered;
  cfg.scoring.Validate();
  MakePolicy(config.policy);  // throws on unknown names

  for (const auto& id : cfg.scenarios) {
    const UsageScenario& sc = cfg.suite.Scenario(id);
    auto violations = ValidateScenario(sc, cfg.suite);
    if (!violations.empty()) throw ConfigError(violations.front().message);
    RequireCosts(cfg.costs, sc, cfg.hw);
  }

  cfg.resolved = config.ToJson();
  cfg.resolved["hardware"] = HardwareToJson(cfg.hw);
  cfg.resolved["cost_table"] = CostTableToJson(cfg.costs);
  cfg.resolved["scoring"] = ScoringConfigToJson(cfg.scoring);
  return cfg;
}

ScenarioRun RunScenario(const UsageScenario& scenario, const LoadedConfig& cfg,
                        const RunConfig& run) {
  RequestStream stream =
      GenerateRequests(scenario, cfg.suite, run.duration_s, run.seed);
  auto policy = MakePolicy(run.policy);
  ScoreTracker tracker(scenario, cfg.suite, cfg.scoring);
  ScenarioRun out;
  out.log = Simulate(scenario, cfg.suite, stream, cfg.hw, cfg.costs, *policy,
                     run.seed,
                     [&](const TimelineEntry& e) { tracker.Observe(e); });
  out.score = tracker.Finish();
  return out;
}

std::string FormatSummary(const ScoreReport& report,
                          const std::string& hardware_id) {
  const double scale =
      report.config.report_scale == ReportScale::kPercent ? 100.0 : 1.0;
  std::ostringstream os;
  fmt::print(os, "hardware: {}\n", hardware_id);
  for (const auto& s : report.scenarios) {
    fmt::print(os, "\n{}\n", s.scenario);
    fmt::print(os, "  {:<8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>12}\n", "model",
               "RT", "EN", "ACC", "QoE", "score", "done/total");
    for (const auto& m : s.models) {
      // Models whose gate never fired have no QoE and are left out.
      const std::string qoe =
          m.scored ? fmt::format("{:.4f}", scale * m.qoe) : "n/a";
      fmt::print(os, "  {:<8} {:>8.4f} {:>8.4f} {:>8.4f} {:>8} {:>8.4f} {:>12}\n",
                 m.model, scale * m.rt_mean, scale * m.en_mean,
                 scale * m.acc_mean, qoe, scale * m.model_score,
                 fmt::format("{}/{}", m.n_processed, m.n_total));
    }
    fmt::print(os, "  scenario score: {:.4f}\n", scale * s.score);
  }
  fmt::print(os, "\noverall ({}): {:.4f}   [arithmetic {:.4f}, geometric {:.4f}]\n",
             ToString(report.config.overall_mean), scale * report.overall(),
             scale * report.overall_arithmetic, scale * report.overall_geometric);
  return os.str();
}

int CmdRun(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    LoadedConfig cfg = LoadConfig(config);
    std::vector<ScenarioScore> scores;
    for (const auto& id : cfg.scenarios) {
      const UsageScenario& sc = cfg.suite.Scenario(id);
      ScenarioRun run = RunScenario(sc, cfg, config);
      if (!config.out_dir.empty()) {
        std::ostringstream csv;
        WriteEventLogCsv(csv, run.log);
        WriteFileAtomic(fs::path(config.out_dir) / fmt::format("timeline_{}.csv", id),
                        csv.str());
        Json events = EventLogToJson(run.log);
        events["config"] = cfg.resolved;
        WriteFileAtomic(fs::path(config.out_dir) / fmt::format("events_{}.json", id),
                        events.dump(2) + "\n");
      }
      scores.push_back(std::move(run.score));
    }
    ScoreReport report = BuildReport(std::move(scores), cfg.scoring);
    const std::string summary = FormatSummary(report, cfg.hw.id);
    if (!config.out_dir.empty()) {
      WriteFileAtomic(fs::path(config.out_dir) / "report.json",
                      ScoreReportToJson(report, cfg.resolved).dump(2) + "\n");
      WriteFileAtomic(fs::path(config.out_dir) / "summary.txt", summary);
    }
    out << summary;
    return 0;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
  } catch (const ScoringError& e) {
    fmt::print(err, "scoring error: {}\n", e.what());
  } catch (const InvalidModelError& e) {
    fmt::print(err, "invalid model: {}\n", e.what());
  }
  return 1;
}

int CmdSweep(const SweepConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.base.scenarios.size() != 1) {
      throw ConfigError("sweep needs exactly one --scenario");
    }
    if (config.values.empty()) throw ConfigError("sweep needs --values");
    LoadedConfig base = LoadConfig(config.base);
    const std::string& scenario_id = base.scenarios.front();
    {
      UsageScenario probe = base.suite.Scenario(scenario_id);
      if (probe.FindEdge(config.edge) == nullptr) {
        throw ConfigError(fmt::format("scenario {} has no edge '{}'",
                                      scenario_id, config.edge));
      }
    }
    for (double v : config.values) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(fmt::format("sweep value {} outside [0, 1]", v));
      }
    }

    struct Point {
      double probability;
      ScenarioScore score;
      Json report;
    };
    auto run_point = [&](size_t i) {
      LoadedConfig cfg = base;
      UsageScenario* sc = nullptr;
      for (auto& s : cfg.suite.scenarios) {
        if (s.id == scenario_id) sc = &s;
      }
      sc->FindEdge(config.edge)->trigger_probability = config.values[i];
      ScenarioRun run = RunScenario(*sc, cfg, config.base);
      Json resolved = cfg.resolved;
      resolved["sweep"] = {{"edge", config.edge},
                           {"probability", config.values[i]}};
      ScoreReport report = BuildReport({run.score}, cfg.scoring);
      Point p{config.values[i], run.score, ScoreReportToJson(report, resolved)};
      if (!config.base.out_dir.empty()) {
        WriteFileAtomic(fs::path(config.base.out_dir) /
                            fmt::format("point_{}", i) / "report.json",
                        p.report.dump(2) + "\n");
      }
      return p;
    };

    std::vector<std::future<Point>> futures;
    for (size_t i = 0; i < config.values.size(); ++i) {
      futures.push_back(std::async(std::launch::async, run_point, i));
    }
    std::ostringstream csv;
    csv << "probability,rt,en,qoe,scenario_score\n";
    for (auto& f : futures) {
      Point p = f.get();
      double rt = 0, en = 0, qoe = 0;
      int n = 0;
      for (const auto& m : p.score.models) {
        if (!m.scored) continue;
        rt += m.rt_mean;
        en += m.en_mean;
        qoe += m.qoe;
        ++n;
      }
      if (n > 0) {
        rt /= n;
        en /= n;
        qoe /= n;
      }
      fmt::print(csv, "{},{},{},{},{}\n", p.probability, rt, en, qoe,
                 p.score.score);
    }
    if (!config.base.out_dir.empty()) {
      WriteFileAtomic(fs::path(config.base.out_dir) / "sweep.csv", csv.str());
    }
    out << csv.str();
    return 0;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
  } catch (const ScoringError& e) {
    fmt::print(err, "scoring error: {}\n", e.what());
  }
  return 1;
}

int CmdValidate(const RunConfig& config, bool check_schedules,
                std::ostream& out, std::ostream& err) {
  try {
    BenchmarkSuite suite =
        config.suite_file.empty()
            ? BuiltinSuite()
            : SuiteFromJson(ReadJsonFile(config.suite_file), config.suite_file);
    auto violations = ValidateSuite(suite);
    for (const auto& v : violations) fmt::print(out, "violation: {}\n", v.message);
    if (!violations.empty()) {
      fmt::print(out, "{} workload violation(s)\n", violations.size());
      return 1;
    }
    fmt::print(out, "workload: ok ({} scenarios)\n", suite.scenarios.size());
    if (!check_schedules) return 0;

    LoadedConfig cfg = LoadConfig(config);
    size_t bad = 0;
    for (const auto& id : cfg.scenarios) {
      const UsageScenario& sc = cfg.suite.Scenario(id);
      ScenarioRun run = RunScenario(sc, cfg, config);
      auto sv = ValidateSchedule(run.log, sc, cfg.suite);
      for (const auto& v : sv) {
        fmt::print(out, "violation: {}: {}: {}\n", id, ToString(v.kind), v.message);
      }
      bad += sv.size();
      if (sv.empty()) fmt::print(out, "schedule {}: ok\n", id);
    }
    return bad == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
  } catch (const ScoringError& e) {
    fmt::print(err, "scoring error: {}\n", e.what());
  }
  return 1;
}

int CmdScore(const ScoreConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.base.scenarios.size() != 1) {
      throw ConfigError("score needs exactly one --scenario");
    }
    if (!config.base.e_max_mj) throw ConfigError("score needs --emax");
    BenchmarkSuite suite =
        config.base.suite_file.empty()
            ? BuiltinSuite()
            : SuiteFromJson(ReadJsonFile(config.base.suite_file),
                            config.base.suite_file);
    const UsageScenario& sc = suite.Scenario(config.base.scenarios.front());
    std::ifstream in(config.log_file);
    if (!in) {
      throw ConfigError(fmt::format("{}: cannot open file", config.log_file));
    }
    EventLog log = ReadEventLogCsv(in, sc, config.log_file);

    ScoringConfig scoring;
    scoring.k = config.base.k;
    scoring.e_max_mj = *config.base.e_max_mj;
    scoring.overall_mean = config.base.mean;
    scoring.report_scale = config.base.scale;
    scoring.count_untriggered_in_total = config.base.count_untriggered;
    scoring.Validate();

    ScoreReport report =
        BuildReport({ScoreScenario(log, sc, suite, scoring)}, scoring);
    Json resolved = config.base.ToJson();
    resolved["log"] = config.log_file;
    resolved["scoring"] = ScoringConfigToJson(scoring);
    const std::string doc = ScoreReportToJson(report, resolved).dump(2) + "\n";
    if (!config.base.out_dir.empty()) {
      WriteFileAtomic(fs::path(config.base.out_dir) / "report.json", doc);
    }
    out << FormatSummary(report, log.hardware);
    return 0;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
  } catch (const ScoringError& e) {
    fmt::print(err, "scoring error: {}\n", e.what());
  }
  return 1;
}

int CmdExportSuite(const std::string& out_file, std::ostream& out,
                   std::ostream& err) {
  try {
    const std::string doc = SuiteToJson(BuiltinSuite()).dump(2) + "\n";
    if (out_file.empty()) {
      out << doc;
    } else {
      WriteFileAtomic(out_file, doc);
    }
    return 0;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return 1;
}

int CmdExportHardware(char preset, int total_pes, const std::string& out_file,
                      std::ostream& out, std::ostream& err) {
  try {
    HardwareSystem hw = AcceleratorPreset(preset, total_pes);
    SyntheticCostParams params = SyntheticCostParams::Defaults();
    const std::string doc = HardwareToJson(hw, &params).dump(2) + "\n";
    if (out_file.empty()) {
      out << doc;
    } else {
      WriteFileAtomic(out_file, doc);
    }
    return 0;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return 1;
}

}  // namespace mmmt
