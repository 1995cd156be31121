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

#include <cmath>

#include "mmmt/scoring.h"
#include "test_util.h"

namespace mmmt {
namespace {

using testing::Rng;

ScoringConfig Config(double e_max = 10.0) {
  ScoringConfig c;
  c.e_max_mj = e_max;
  return c;
}

TEST_CASE("real-time score") {
  CHECK(RtScore(33.3, 33.3, 10) == 0.5);
  CHECK(RtScore(0.0, 0.0, 1e6) == 0.5);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(RtScore(rng.Uniform(-1e4, 1e4), rng.Uniform(-1e4, 1e4), 0.0) == 0.5);
  }
  // 1 / (1 + e^-10)
  CHECK(RtScore(0.0, 1000.0, 10) == doctest::Approx(0.9999546).epsilon(1e-7));
  CHECK(RtScore(0.0, 1000.0, 10) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-10.0))).epsilon(1e-15));
  // Saturates instead of overflowing.
  CHECK(RtScore(1e12, 0.0, 10) >= 0.0);
  CHECK(RtScore(1e12, 0.0, 10) < 1e-300);
  CHECK(RtScore(-1e12, 0.0, 10) == 1.0);
}

TEST_CASE("real-time score is monotone and bounded") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double slack = rng.Uniform(0, 200);
    const double k = rng.Uniform(0, 100);
    const double l1 = rng.Uniform(-500, 500);
    const double l2 = l1 + rng.Uniform(0, 500);
    const double a = RtScore(l1, slack, k);
    const double b = RtScore(l2, slack, k);
    CHECK(a >= b);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    // Strict away from double-precision saturation.
    if (k > 0 && l2 > l1 + 1 && std::abs(k * (l1 - slack)) < 20e3 &&
        std::abs(k * (l2 - slack)) < 20e3) {
      CHECK(a > b);
    }
  }
  CHECK(RtScore(-1e6, 0, 10) == doctest::Approx(1.0));
  CHECK(RtScore(1e6, 0, 10) == doctest::Approx(0.0));
}

TEST_CASE("energy score") {
  CHECK(EnergyScore(0.0, 4.0) == 1.0);
  CHECK(EnergyScore(4.0, 4.0) == 0.0);
  CHECK(EnergyScore(2.0, 4.0) == 0.5);
  CHECK_THROWS_AS(EnergyScore(4.5, 4.0), ScoringError);
  CHECK_THROWS_AS(EnergyScore(-0.1, 4.0), ScoringError);
  CHECK_THROWS_AS(EnergyScore(0.0, 0.0), ScoringError);
}

TEST_CASE("accuracy score") {
  CHECK(AccuracyScore(89.88, 89.88, MetricDirection::kHigherIsBetter) == 1.0);
  CHECK(AccuracyScore(85.60, 89.88, MetricDirection::kHigherIsBetter) ==
        doctest::Approx(0.95238).epsilon(1e-5));
  CHECK(AccuracyScore(99.0, 89.88, MetricDirection::kHigherIsBetter) == 1.0);
  CHECK(AccuracyScore(10.0, 9.5, MetricDirection::kLowerIsBetter) ==
        doctest::Approx(0.95).epsilon(1e-12));
  CHECK(AccuracyScore(-3.0, 9.5, MetricDirection::kHigherIsBetter) == 0.0);
  CHECK_THROWS_AS(AccuracyScore(1, 0, MetricDirection::kHigherIsBetter),
                  ScoringError);
  CHECK_THROWS_AS(AccuracyScore(0, 1, MetricDirection::kLowerIsBetter),
                  ScoringError);
  // Default configuration: the achieved metric is the goal.
  for (const auto& m : BuiltinSuite().models) {
    CHECK(AccuracyScore(AchievedMetric(m), AccuracyGoal(m), m.metric_direction) ==
          1.0);
  }
}

TEST_CASE("qoe score") {
  CHECK(QoeScore(30, 30) == 1.0);
  CHECK(QoeScore(529, 1000) == doctest::Approx(1 - 0.471).epsilon(1e-12));
  CHECK(std::round(QoeScore(529, 1000) * 100) / 100 == 0.53);
  CHECK(QoeScore(977, 1000) == doctest::Approx(0.977).epsilon(1e-12));
  for (int n = 1; n < 200; ++n) {
    CHECK(QoeScore(n, n) == 1.0);
    CHECK(QoeScore(0, n) == 0.0);
  }
  CHECK_THROWS_AS(QoeScore(0, 0), ScoringError);
  CHECK_THROWS_AS(QoeScore(3, 2), ScoringError);
  CHECK_THROWS_AS(QoeScore(-1, 2), ScoringError);
}

TEST_CASE("per-inference and overall scores") {
  CHECK(PerInferenceScore(1, 1, 1) == 1.0);
  CHECK(PerInferenceScore(0.5, 0.8, 1) == doctest::Approx(0.4));
  CHECK(PerInferenceScore(0.0, 0.8, 1) == 0.0);

  const std::vector<double> same = {0.3, 0.3, 0.3};
  CHECK(OverallScore(same, MeanKind::kArithmetic) == doctest::Approx(0.3));
  CHECK(OverallScore(same, MeanKind::kGeometric) == doctest::Approx(0.3));
  const std::vector<double> one_zero = {1.0, 0.0};
  CHECK(OverallScore(one_zero, MeanKind::kArithmetic) == 0.5);
  CHECK(OverallScore(one_zero, MeanKind::kGeometric) == 0.0);
  const std::vector<double> halves(7, 0.5);
  CHECK(OverallScore(halves, MeanKind::kArithmetic) == 0.5);
  CHECK(OverallScore(std::vector<double>{0.25, 1.0}, MeanKind::kGeometric) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(OverallScore(std::vector<double>{}, MeanKind::kArithmetic),
                  ScoringError);
}

TEST_CASE("config validation") {
  ScoringConfig c = Config();
  CHECK_NOTHROW(c.Validate());
  c.k = -1;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = Config(0.0);
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  CHECK(MeanKindFromString("geometric") == MeanKind::kGeometric);
  CHECK(ReportScaleFromString("percent") == ReportScale::kPercent);
  CHECK_THROWS_AS(MeanKindFromString("median"), ConfigError);
}

// A two-model scenario with hand-written log entries.
struct Fixture {
  BenchmarkSuite suite;
  UsageScenario scenario;
  Fixture() {
    suite = testing::SingleModelSuite(60, 30);
    UnitModel n = suite.models.front();
    n.id = "N";
    suite.models.push_back(n);
    scenario = suite.scenarios.front();
    scenario.entries.push_back({"N", "N", 30, {}});
  }
  static TimelineEntry Entry(const char* model, int64_t k, EntryStatus st,
                             double latency_ms, double slack_ms,
                             double energy) {
    TimelineEntry e;
    e.request = {model, 2 * k + 1, k, Time(0), FromMillis(slack_ms)};
    e.status = st;
    if (st == EntryStatus::kCompleted) {
      e.unit = "u0";
      e.t_start = Time(0);
      e.t_end = FromMillis(latency_ms);
      e.energy_mj = energy;
    }
    return e;
  }
};

TEST_CASE("model and scenario aggregation") {
  Fixture f;
  ScoringConfig cfg = Config(10.0);
  cfg.k = 0;  // rt = 0.5 everywhere
  EventLog log;
  log.entries = {
      Fixture::Entry("M", 0, EntryStatus::kCompleted, 1, 30, 2.0),  // 0.5*0.8
      Fixture::Entry("M", 1, EntryStatus::kCompleted, 1, 30, 0.0),  // 0.5*1
      Fixture::Entry("M", 2, EntryStatus::kDropped, 0, 30, 0),
      Fixture::Entry("N", 0, EntryStatus::kDropped, 0, 30, 0),
  };
  ScenarioScore s = ScoreScenario(log, f.scenario, f.suite, cfg);
  const ModelScore& m = s.Model("M");
  CHECK(m.model_score == doctest::Approx(0.45));
  CHECK(m.rt_mean == 0.5);
  CHECK(m.en_mean == doctest::Approx(0.9));
  CHECK(m.acc_mean == 1.0);
  CHECK(m.qoe == doctest::Approx(2.0 / 3.0));
  CHECK(m.n_total == 3);
  CHECK(m.n_processed == 2);
  CHECK(m.n_dropped == 1);
  CHECK(m.n_sat == 2);
  // Everything dropped: model score 0.
  CHECK(s.Model("N").model_score == 0.0);
  CHECK(s.Model("N").qoe == 0.0);
  CHECK(s.score == doctest::Approx((0.45 * 2.0 / 3.0 + 0.0) / 2));
  CHECK(PerModelScore(log, "M", f.scenario, f.suite, cfg) == m.model_score);
  CHECK(s.inferences.size() == 2);
}

TEST_CASE("untriggered requests stay out of the qoe denominator") {
  Fixture f;
  ScoringConfig cfg = Config();
  EventLog log;
  log.entries = {
      Fixture::Entry("M", 0, EntryStatus::kCompleted, 1, 30, 0),
      Fixture::Entry("M", 1, EntryStatus::kUntriggered, 0, 30, 0),
      Fixture::Entry("N", 0, EntryStatus::kUntriggered, 0, 30, 0),
  };
  ScenarioScore s = ScoreScenario(log, f.scenario, f.suite, cfg);
  CHECK(s.Model("M").qoe == 1.0);
  CHECK(s.Model("M").n_total == 2);
  CHECK(s.Model("M").n_untriggered == 1);
  CHECK_FALSE(s.Model("N").scored);
  CHECK(s.score == s.Model("M").model_score);

  cfg.count_untriggered_in_total = true;
  ScenarioScore t = ScoreScenario(log, f.scenario, f.suite, cfg);
  CHECK(t.Model("M").qoe == 0.5);
  CHECK(t.Model("N").scored);
  CHECK(t.Model("N").qoe == 0.0);
}

TEST_CASE("zero rt on every frame zeroes the model term") {
  Fixture f;
  ScoringConfig cfg = Config();
  cfg.k = 1e6;
  EventLog log;
  for (int k = 0; k < 10; ++k) {
    log.entries.push_back(Fixture::Entry("M", k, k == 9 ? EntryStatus::kDropped
                                                        : EntryStatus::kCompleted,
                                         500, 30, 0));
  }
  log.entries.push_back(Fixture::Entry("N", 0, EntryStatus::kCompleted, 1, 30, 0));
  ScenarioScore s = ScoreScenario(log, f.scenario, f.suite, cfg);
  CHECK(s.Model("M").qoe == doctest::Approx(0.9));
  CHECK(s.Model("M").model_score < 1e-300);
  CHECK(s.score == doctest::Approx(s.Model("N").model_score / 2));
}

TEST_CASE("tiny latency and zero energy leave qoe alone") {
  Fixture f;
  ScoringConfig cfg = Config();
  cfg.k = 10;
  EventLog log;
  for (int k = 0; k < 8; ++k) {
    log.entries.push_back(Fixture::Entry(
        "M", k, k % 4 == 0 ? EntryStatus::kDropped : EntryStatus::kCompleted,
        0.001, 1e5, 0));
    log.entries.push_back(
        Fixture::Entry("N", k, EntryStatus::kCompleted, 0.001, 1e5, 0));
  }
  ScenarioScore s = ScoreScenario(log, f.scenario, f.suite, cfg);
  CHECK(s.score == doctest::Approx((0.75 + 1.0) / 2).epsilon(1e-12));
}

TEST_CASE("tracker order independence and error paths") {
  Fixture f;
  ScoringConfig cfg = Config();
  Rng rng(4);
  std::vector<TimelineEntry> entries;
  for (int k = 0; k < 40; ++k) {
    for (const char* m : {"M", "N"}) {
      const bool done = rng.Coin(0.7);
      entries.push_back(Fixture::Entry(
          m, k, done ? EntryStatus::kCompleted : EntryStatus::kDropped,
          rng.Uniform(0.001, 80), 33.333, done ? rng.Uniform(0, 10) : 0));
    }
  }
  ScoreTracker in_order(f.scenario, f.suite, cfg);
  for (const auto& e : entries) in_order.Observe(e);
  ScenarioScore a = in_order.Finish();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TimelineEntry> shuffled = entries;
    for (size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1],
                shuffled[static_cast<size_t>(rng.Int(0, static_cast<int64_t>(i) - 1))]);
    }
    ScoreTracker t(f.scenario, f.suite, cfg);
    for (const auto& e : shuffled) t.Observe(e);
    CHECK(t.Finish() == a);
  }

  ScoreTracker dup(f.scenario, f.suite, cfg);
  dup.Observe(entries[0]);
  CHECK_THROWS_AS(dup.Observe(entries[0]), ScoringError);
  ScoreTracker gap(f.scenario, f.suite, cfg);
  gap.Observe(entries[2]);  // M#1 without M#0
  CHECK_THROWS_AS(gap.Finish(), ScoringError);
  ScoreTracker unknown(f.scenario, f.suite, cfg);
  CHECK_THROWS_AS(unknown.Observe(Fixture::Entry("Q", 0, EntryStatus::kDropped,
                                                 0, 1, 0)),
                  ScoringError);
  ScoreTracker over(f.scenario, f.suite, Config(1.0));
  CHECK_THROWS_AS(over.Observe(Fixture::Entry("M", 0, EntryStatus::kCompleted,
                                              1, 30, 2.0)),
                  ScoringError);
}

TEST_CASE("report keeps both means") {
  ScenarioScore a, b;
  a.scenario = "a";
  a.score = 0.8;
  b.scenario = "b";
  b.score = 0.2;
  ScoringConfig cfg = Config();
  cfg.overall_mean = MeanKind::kGeometric;
  ScoreReport r = BuildReport({a, b}, cfg);
  CHECK(r.overall_arithmetic == doctest::Approx(0.5));
  CHECK(r.overall_geometric == doctest::Approx(0.4));
  CHECK(r.overall() == r.overall_geometric);
}

}  // namespace
}  // namespace mmmt
