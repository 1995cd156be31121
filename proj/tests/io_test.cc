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

#include "mmmt/io.h"
#include "test_util.h"

namespace mmmt {
namespace {

using testing::Rng;
namespace fs = std::filesystem;

TEST_CASE("suite json round trip") {
  BenchmarkSuite builtin = BuiltinSuite();
  CHECK(SuiteFromJson(SuiteToJson(builtin), "builtin") == builtin);
  CHECK(SuiteToJson(builtin)["schema_version"] == kSchemaVersion);

  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    BenchmarkSuite s = testing::RandomSuite(rng);
    Json j = Json::parse(SuiteToJson(s).dump());
    CHECK(SuiteFromJson(j, "fuzz") == s);
  }
}

TEST_CASE("suite parse errors carry context") {
  Json j = SuiteToJson(BuiltinSuite());
  j["scenarios"][0]["entries"][0].erase("target_rate_hz");
  CHECK_THROWS_WITH_AS(SuiteFromJson(j, "suite.json"),
                       doctest::Contains("suite.json"), ConfigError);
  CHECK_THROWS_WITH_AS(SuiteFromJson(j, "suite.json"),
                       doctest::Contains("target_rate_hz"), ConfigError);

  Json bad_kind = SuiteToJson(BuiltinSuite());
  bad_kind["scenarios"][0]["entries"][2]["dependencies"][0]["kind"] = "maybe";
  CHECK_THROWS_AS(SuiteFromJson(bad_kind, "s"), ConfigError);

  Json version = SuiteToJson(BuiltinSuite());
  version["schema_version"] = 99;
  CHECK_THROWS_WITH_AS(SuiteFromJson(version, "s"),
                       doctest::Contains("schema_version"), ConfigError);

  Json wrong_type = SuiteToJson(BuiltinSuite());
  wrong_type["input_sources"][0]["streaming_rate_fps"] = "fast";
  CHECK_THROWS_AS(SuiteFromJson(wrong_type, "s"), ConfigError);
}

TEST_CASE("hardware json round trip") {
  for (char id = 'A'; id <= 'M'; ++id) {
    HardwareSystem hw = AcceleratorPreset(id, 8192);
    CHECK(HardwareFromJson(HardwareToJson(hw), "hw") == hw);
  }
  SyntheticCostParams p = SyntheticCostParams::Defaults();
  Json j = HardwareToJson(AcceleratorPreset('K', 4096), &p);
  SyntheticCostParams back = SyntheticParamsFromJson(j, "hw");
  CHECK(back.default_efficiency == p.default_efficiency);
  CHECK(back.efficiency == p.efficiency);
  // No synthetic section: defaults.
  Json plain = HardwareToJson(AcceleratorPreset('K', 4096));
  CHECK(SyntheticParamsFromJson(plain, "hw").efficiency == p.efficiency);

  Json fda = HardwareToJson(AcceleratorPreset('A', 4096));
  fda["units"].push_back(fda["units"][0]);
  fda["units"][1]["id"] = "other";
  CHECK_THROWS_AS(HardwareFromJson(fda, "hw"), ConfigError);
}

TEST_CASE("cost table json") {
  BenchmarkSuite suite = BuiltinSuite();
  HardwareSystem hw = AcceleratorPreset('J', 4096);
  CostTable t = SyntheticCostTable(suite, hw, SyntheticCostParams::Defaults(), 100);
  Json j = Json::parse(CostTableToJson(t).dump());
  CHECK(CostTableFromJson(j, "costs") == t);
  CHECK(j["e_max_mj"] == 100.0);

  j["entries"][0]["latency_ms"] = 0.0;
  CHECK_THROWS_WITH_AS(CostTableFromJson(j, "costs.json"),
                       doctest::Contains("costs.json"), ConfigError);
  Json over = CostTableToJson(t);
  over["e_max_mj"] = 1e-9;
  CHECK_THROWS_AS(CostTableFromJson(over, "c"), ConfigError);
  Json missing = CostTableToJson(t);
  missing.erase("e_max_mj");
  CHECK_THROWS_WITH_AS(CostTableFromJson(missing, "c"),
                       doctest::Contains("e_max_mj"), ConfigError);
}

TEST_CASE("event log csv round trip on fuzzed runs") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    BenchmarkSuite suite = testing::RandomSuite(rng);
    const UsageScenario& sc = suite.scenarios.front();
    HardwareSystem hw = testing::RandomHardware(rng);
    CostTable costs = testing::RandomCosts(suite, hw, rng, 5.0);
    const uint64_t seed = rng.Seed();
    RequestStream st = GenerateRequests(sc, suite, 1.0, seed);
    LatencyGreedyPolicy p;
    EventLog log = Simulate(sc, suite, st, hw, costs, p, seed);

    std::stringstream ss;
    WriteEventLogCsv(ss, log);
    EventLog back = ReadEventLogCsv(ss, sc, "log.csv");
    CHECK(back.scenario == log.scenario);
    CHECK(back.hardware == log.hardware);
    CHECK(back.seed == log.seed);
    CHECK(back.duration_s == log.duration_s);
    CHECK(back.entries == log.entries);
    for (size_t i = 0; i < log.counts.size(); ++i) {
      ModelCounts c = log.counts[i];
      c.n_triggered = 0;
      CHECK(back.counts[i] == c);
    }
  }
}

TEST_CASE("event log csv layout") {
  BenchmarkSuite suite = testing::SingleModelSuite(4, 4);
  const UsageScenario& sc = suite.scenarios.front();
  HardwareSystem hw = testing::SingleUnit();
  CostTable costs = testing::UniformCosts(suite, hw, 800, 0.25, 1.0);
  LatencyGreedyPolicy p;
  EventLog log =
      Simulate(sc, suite, GenerateRequests(sc, suite, 0.5, 0), hw, costs, p, 0);
  std::ostringstream os;
  WriteEventLogCsv(os, log);
  CHECK(os.str() ==
        "# schema_version=1,scenario=single,hardware=single,seed=0,duration_s=0.5\n"
        "model,request_index,frame_index,unit,t_req,t_start,t_end,t_dl,status,energy_mj\n"
        "M,0,0,u0,0.000,0.000,800.000,250.000,completed,0.25\n"
        "M,1,1,,250.000,,,500.000,dropped,0\n");

  std::istringstream wrong(os.str());
  UsageScenario other = sc;
  other.id = "other";
  CHECK_THROWS_AS(ReadEventLogCsv(wrong, other, "x"), ConfigError);
  std::istringstream no_header("model,request_index\n");
  CHECK_THROWS_AS(ReadEventLogCsv(no_header, sc, "x"), ConfigError);
  std::istringstream bad_row(
      "# schema_version=1,scenario=single\nheader\nM,0,0,u0,abc,0,1,2,completed,0\n");
  CHECK_THROWS_WITH_AS(ReadEventLogCsv(bad_row, sc, "x"),
                       doctest::Contains("line 3"), ConfigError);
  std::istringstream future("# schema_version=2,scenario=single\n");
  CHECK_THROWS_AS(ReadEventLogCsv(future, sc, "x"), ConfigError);
}

TEST_CASE("event log json embeds counts") {
  BenchmarkSuite suite = testing::SingleModelSuite(4, 4);
  const UsageScenario& sc = suite.scenarios.front();
  HardwareSystem hw = testing::SingleUnit();
  CostTable costs = testing::UniformCosts(suite, hw, 800, 0.25, 1.0);
  LatencyGreedyPolicy p;
  EventLog log =
      Simulate(sc, suite, GenerateRequests(sc, suite, 1.0, 0), hw, costs, p, 0);
  Json j = EventLogToJson(log);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["entries"].size() == 4);
  CHECK(j["counts"]["M"]["n_total"] == 4);
  CHECK(j["counts"]["M"]["n_dropped"] == 2);
}

TEST_CASE("score report json") {
  ScoringConfig cfg;
  cfg.e_max_mj = 2.0;
  cfg.report_scale = ReportScale::kPercent;
  ScenarioScore s;
  s.scenario = "sc";
  ModelScore m;
  m.model = "M";
  m.rt_mean = 0.5;
  m.model_score = 0.25;
  m.qoe = 1.0;
  m.n_total = 4;
  s.models = {m};
  s.score = 0.25;
  ScoreReport r = BuildReport({s}, cfg);
  Json j = ScoreReportToJson(r, Json{{"seed", 3}});
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["config"]["seed"] == 3);
  CHECK(j["scenarios"]["sc"]["scenario_score"] == 25.0);
  CHECK(j["scenarios"]["sc"]["models"]["M"]["rt_mean"] == 50.0);
  CHECK(j["scenarios"]["sc"]["models"]["M"]["n_total"] == 4);
  CHECK(j["overall"]["arithmetic"] == 25.0);
  CHECK(j["overall"]["geometric"] == 25.0);
  for (const char* key : {"rt_mean", "en_mean", "acc_mean", "model_score", "qoe",
                          "n_total", "n_processed", "n_dropped", "n_sat"}) {
    CHECK(j["scenarios"]["sc"]["models"]["M"].contains(key));
  }
}

TEST_CASE("files") {
  fs::path dir = fs::temp_directory_path() / "mmmt_io_test";
  fs::remove_all(dir);
  WriteFileAtomic(dir / "sub" / "a.json", "{\"x\": 1}\n");
  CHECK(ReadJsonFile(dir / "sub" / "a.json")["x"] == 1);
  CHECK_FALSE(fs::exists(dir / "sub" / "a.json.tmp"));
  CHECK_THROWS_AS(ReadJsonFile(dir / "missing.json"), ConfigError);
  {
    std::ofstream(dir / "bad.json") << "{nope";
  }
  CHECK_THROWS_WITH_AS(ReadJsonFile(dir / "bad.json"),
                       doctest::Contains("bad.json"), ConfigError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace mmmt
