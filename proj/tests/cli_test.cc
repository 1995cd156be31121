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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmmt/cli.h"
#include "test_util.h"

namespace mmmt {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("mmmt_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig BaseConfig(const fs::path& out) {
  RunConfig c;
  c.hw = "preset:J:4096";
  c.e_max_mj = 1000.0;
  c.out_dir = out.string();
  return c;
}

void WriteJson(const fs::path& p, const Json& j) { std::ofstream(p) << j.dump(2); }

TEST_CASE("run the built-in suite") {
  TempDir tmp("run");
  std::ostringstream out, err;
  REQUIRE(CmdRun(BaseConfig(tmp.path), out, err) == 0);
  CHECK(err.str().empty());
  Json report = ReadJsonFile(tmp.path / "report.json");
  CHECK(report["schema_version"] == kSchemaVersion);
  CHECK(report["scenarios"].size() == 7);
  CHECK(report["overall"].contains("arithmetic"));
  CHECK(report["overall"].contains("geometric"));
  CHECK(report["config"]["hardware"]["id"] == "J_4k");
  CHECK(report["config"]["seed"] == 0);
  for (const auto& sc : BuiltinSuite().scenarios) {
    CHECK(fs::exists(tmp.path / ("timeline_" + sc.id + ".csv")));
    Json ev = ReadJsonFile(tmp.path / ("events_" + sc.id + ".json"));
    CHECK(ev["schema_version"] == kSchemaVersion);
    CHECK(ev["config"] == report["config"]);
    CHECK(Slurp(tmp.path / ("timeline_" + sc.id + ".csv")).rfind("# schema_version=1", 0) == 0);
  }
  const std::string summary = Slurp(tmp.path / "summary.txt");
  CHECK(summary == out.str());
  CHECK(summary.find("QoE") != std::string::npos);
  CHECK(summary.find("vr_gaming") != std::string::npos);
}

TEST_CASE("identical config runs are byte-identical") {
  TempDir a("det_a"), b("det_b"), c("det_c");
  std::ostringstream out, err;
  REQUIRE(CmdRun(BaseConfig(a.path), out, err) == 0);
  REQUIRE(CmdRun(BaseConfig(b.path), out, err) == 0);
  CHECK(Slurp(a.path / "report.json") == Slurp(b.path / "report.json"));
  CHECK(Slurp(a.path / "timeline_ar_assistant.csv") ==
        Slurp(b.path / "timeline_ar_assistant.csv"));
  RunConfig other = BaseConfig(c.path);
  other.seed = 1;
  REQUIRE(CmdRun(other, out, err) == 0);
  CHECK(Slurp(a.path / "timeline_vr_gaming.csv") !=
        Slurp(c.path / "timeline_vr_gaming.csv"));
}

TEST_CASE("missing cost entry fails naming the pair") {
  TempDir tmp("missing");
  BenchmarkSuite suite = BuiltinSuite();
  HardwareSystem hw = AcceleratorPreset('J', 4096);
  CostTable full = SyntheticCostTable(suite, hw, SyntheticCostParams::Defaults(), 1000);
  CostTable partial(1000);
  for (const auto& e : full.Entries()) {
    if (!(e.model == "PD" && e.unit == "u1_OS")) partial.Add(e);
  }
  WriteJson(tmp.path / "costs.json", CostTableToJson(partial));

  RunConfig cfg = BaseConfig(tmp.path / "out");
  cfg.costs_file = (tmp.path / "costs.json").string();
  cfg.e_max_mj.reset();
  std::ostringstream out, err;
  CHECK(CmdRun(cfg, out, err) != 0);
  CHECK(err.str().find("'PD'") != std::string::npos);
  CHECK(err.str().find("'u1_OS'") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp.path / "out" / "report.json"));

  // Scenarios that do not use PD still run.
  cfg.scenarios = {"vr_gaming"};
  std::ostringstream out2, err2;
  CHECK(CmdRun(cfg, out2, err2) == 0);
}

TEST_CASE("configuration errors exit nonzero") {
  TempDir tmp("errors");
  std::ostringstream out, err;
  RunConfig no_emax = BaseConfig(tmp.path);
  no_emax.e_max_mj.reset();
  CHECK(CmdRun(no_emax, out, err) != 0);
  CHECK(err.str().find("--emax") != std::string::npos);

  RunConfig bad_hw = BaseConfig(tmp.path);
  bad_hw.hw = "preset:Q:4096";
  CHECK(CmdRun(bad_hw, out, err) != 0);
  bad_hw.hw = (tmp.path / "nope.json").string();
  CHECK(CmdRun(bad_hw, out, err) != 0);

  RunConfig bad_policy = BaseConfig(tmp.path);
  bad_policy.policy = "random";
  CHECK(CmdRun(bad_policy, out, err) != 0);

  RunConfig bad_duration = BaseConfig(tmp.path);
  bad_duration.duration_s = 0;
  CHECK(CmdRun(bad_duration, out, err) != 0);

  RunConfig bad_scenario = BaseConfig(tmp.path);
  bad_scenario.scenarios = {"mars_walk"};
  CHECK(CmdRun(bad_scenario, out, err) != 0);

  RunConfig small_emax = BaseConfig(tmp.path);
  small_emax.e_max_mj = 1e-9;
  CHECK(CmdRun(small_emax, out, err) != 0);

  std::ofstream(tmp.path / "broken.json") << "{";
  RunConfig bad_suite = BaseConfig(tmp.path);
  bad_suite.suite_file = (tmp.path / "broken.json").string();
  err.str("");
  CHECK(CmdRun(bad_suite, out, err) != 0);
  CHECK(err.str().find("broken.json") != std::string::npos);
}

TEST_CASE("hardware and suite files") {
  TempDir tmp("files");
  std::ostringstream out, err;
  REQUIRE(CmdExportHardware('M', 8192, (tmp.path / "m.json").string(), out, err) == 0);
  REQUIRE(CmdExportSuite((tmp.path / "suite.json").string(), out, err) == 0);
  CHECK(SuiteFromJson(ReadJsonFile(tmp.path / "suite.json"), "s") == BuiltinSuite());

  RunConfig from_files = BaseConfig(tmp.path / "a");
  from_files.hw = (tmp.path / "m.json").string();
  from_files.suite_file = (tmp.path / "suite.json").string();
  RunConfig preset = BaseConfig(tmp.path / "b");
  preset.hw = "preset:M:8192";
  REQUIRE(CmdRun(from_files, out, err) == 0);
  REQUIRE(CmdRun(preset, out, err) == 0);
  Json a = ReadJsonFile(tmp.path / "a" / "report.json");
  Json b = ReadJsonFile(tmp.path / "b" / "report.json");
  CHECK(a["scenarios"] == b["scenarios"]);
  CHECK(a["overall"] == b["overall"]);

  std::ostringstream suite_out;
  REQUIRE(CmdExportSuite("", suite_out, err) == 0);
  CHECK(SuiteFromJson(Json::parse(suite_out.str()), "stdout") == BuiltinSuite());
}

TEST_CASE("near-zero latency costs give QoE 1 everywhere") {
  TempDir tmp("qoe");
  BenchmarkSuite suite = BuiltinSuite();
  HardwareSystem hw = AcceleratorPreset('A', 4096);
  WriteJson(tmp.path / "costs.json",
            CostTableToJson(testing::UniformCosts(suite, hw, 0.001, 0.0, 1.0)));
  RunConfig cfg = BaseConfig(tmp.path / "out");
  cfg.hw = "preset:A:4096";
  cfg.costs_file = (tmp.path / "costs.json").string();
  cfg.e_max_mj.reset();
  std::ostringstream out, err;
  REQUIRE(CmdRun(cfg, out, err) == 0);
  Json report = ReadJsonFile(tmp.path / "out" / "report.json");
  for (const auto& [sc, body] : report["scenarios"].items()) {
    for (const auto& [m, scores] : body["models"].items()) {
      CAPTURE(sc);
      CAPTURE(m);
      if (scores["scored"].get<bool>()) CHECK(scores["qoe"] == 1.0);
      CHECK(scores["n_dropped"] == 0);
    }
  }
}

TEST_CASE("sweep") {
  TempDir tmp("sweep");
  SweepConfig cfg;
  cfg.base = BaseConfig(tmp.path);
  cfg.base.scenarios = {"vr_gaming"};
  cfg.edge = "ES->GE";
  cfg.values = {0, 0.25, 0.5, 0.75, 1.0};
  std::ostringstream out, err;
  REQUIRE(CmdSweep(cfg, out, err) == 0);
  const std::string csv = Slurp(tmp.path / "sweep.csv");
  CHECK(csv == out.str());
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "probability,rt,en,qoe,scenario_score");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5);

  Json p0 = ReadJsonFile(tmp.path / "point_0" / "report.json");
  CHECK(p0["config"]["sweep"]["probability"] == 0.0);
  CHECK(p0["scenarios"]["vr_gaming"]["models"]["GE"]["n_processed"] == 0);
  Json p4 = ReadJsonFile(tmp.path / "point_4" / "report.json");
  CHECK(p4["scenarios"]["vr_gaming"]["models"]["GE"]["n_untriggered"] == 0);

  // Concurrency must not change results.
  TempDir again("sweep2");
  cfg.base.out_dir = again.path.string();
  std::ostringstream out2;
  REQUIRE(CmdSweep(cfg, out2, err) == 0);
  CHECK(out2.str() == out.str());
  CHECK(Slurp(again.path / "point_2" / "report.json") ==
        Slurp(tmp.path / "point_2" / "report.json"));
}

TEST_CASE("sweep errors") {
  TempDir tmp("sweep_err");
  SweepConfig cfg;
  cfg.base = BaseConfig(tmp.path);
  cfg.base.scenarios = {"vr_gaming"};
  cfg.edge = "KD->SR";
  cfg.values = {0.5};
  std::ostringstream out, err;
  CHECK(CmdSweep(cfg, out, err) != 0);
  CHECK(err.str().find("KD->SR") != std::string::npos);
  cfg.edge = "ES->GE";
  cfg.values = {1.5};
  CHECK(CmdSweep(cfg, out, err) != 0);
  cfg.values = {};
  CHECK(CmdSweep(cfg, out, err) != 0);
  cfg.values = {0.5};
  cfg.base.scenarios = {};
  CHECK(CmdSweep(cfg, out, err) != 0);
}

TEST_CASE("validate") {
  TempDir tmp("validate");
  std::ostringstream out, err;
  RunConfig cfg = BaseConfig(tmp.path);
  CHECK(CmdValidate(cfg, false, out, err) == 0);
  CHECK(out.str().find("ok") != std::string::npos);
  std::ostringstream out2;
  CHECK(CmdValidate(cfg, true, out2, err) == 0);
  CHECK(out2.str().find("schedule vr_gaming: ok") != std::string::npos);

  BenchmarkSuite cyclic = BuiltinSuite();
  cyclic.scenarios.back().entries[1].dependencies.push_back(
      {"GE", "ES", DependencyKind::kData, 1.0});
  WriteJson(tmp.path / "cyclic.json", SuiteToJson(cyclic));
  cfg.suite_file = (tmp.path / "cyclic.json").string();
  std::ostringstream out3;
  CHECK(CmdValidate(cfg, false, out3, err) != 0);
  CHECK(out3.str().find("cycle") != std::string::npos);

  BenchmarkSuite fast = BuiltinSuite();
  fast.scenarios.front().entries.front().target_rate = 90;
  WriteJson(tmp.path / "fast.json", SuiteToJson(fast));
  cfg.suite_file = (tmp.path / "fast.json").string();
  std::ostringstream out4;
  CHECK(CmdValidate(cfg, false, out4, err) != 0);
  CHECK(out4.str().find("rate exceeds source") != std::string::npos);
}

TEST_CASE("score recomputes the run report from the timeline") {
  TempDir tmp("score");
  RunConfig cfg = BaseConfig(tmp.path / "run");
  cfg.scenarios = {"ar_assistant"};
  cfg.k = 25;
  std::ostringstream out, err;
  REQUIRE(CmdRun(cfg, out, err) == 0);
  Json run = ReadJsonFile(tmp.path / "run" / "report.json");

  ScoreConfig sc;
  sc.base = cfg;
  sc.base.out_dir = (tmp.path / "score").string();
  sc.log_file = (tmp.path / "run" / "timeline_ar_assistant.csv").string();
  std::ostringstream out2;
  REQUIRE(CmdScore(sc, out2, err) == 0);
  Json rescored = ReadJsonFile(tmp.path / "score" / "report.json");
  CHECK(rescored["scenarios"] == run["scenarios"]);
  CHECK(rescored["overall"] == run["overall"]);

  sc.log_file = (tmp.path / "nope.csv").string();
  CHECK(CmdScore(sc, out2, err) != 0);
  sc.base.scenarios = {"vr_gaming"};
  sc.log_file = (tmp.path / "run" / "timeline_ar_assistant.csv").string();
  CHECK(CmdScore(sc, out2, err) != 0);
}

}  // namespace
}  // namespace mmmt
