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

// Unit scores (real-time, energy, accuracy, QoE) and their aggregation:
//
//   inference = rt * energy * accuracy
//   model     = mean of inference scores over completed requests
//   scenario  = mean over models of (model score * QoE)
//   overall   = mean over scenarios (arithmetic or geometric)
//
// Every sum is taken in a fixed order (ascending request index, then
// scenario model order, then scenario order) so results are bit-exact.

#ifndef MMMT_SCORING_H_
#define MMMT_SCORING_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mmmt/common.h"
#include "mmmt/runtime.h"
#include "mmmt/workload.h"

namespace mmmt {

enum class MeanKind { kArithmetic, kGeometric };
enum class ReportScale { kUnit, kPercent };

const char* ToString(MeanKind m);
MeanKind MeanKindFromString(const std::string& s);
const char* ToString(ReportScale s);
ReportScale ReportScaleFromString(const std::string& s);

struct ScoringConfig {
  double k = 10.0;  // deadline sensitivity, 1/s
  double e_max_mj = 0.0;
  MeanKind overall_mean = MeanKind::kArithmetic;
  ReportScale report_scale = ReportScale::kUnit;
  // When false, requests whose gate never fired are left out of the QoE
  // denominator.
  bool count_untriggered_in_total = false;

  // Throws ConfigError unless k >= 0 and e_max > 0.
  void Validate() const;
};

// 1 / (1 + exp(k * (latency - slack))), with the difference in seconds and
// the exponent clamped to [-700, 700].
double RtScore(double latency_ms, double slack_ms, double k);

// (e_max - e) / e_max. ScoringError if e < 0 or e > e_max.
double EnergyScore(double energy_mj, double e_max_mj);

// achieved/goal (higher is better) or goal/achieved (errors), clamped to
// [0, 1]. ScoringError on goal <= 0, or achieved <= 0 for errors.
double AccuracyScore(double achieved, double goal, MetricDirection direction);

// processed / total. ScoringError on total <= 0 or processed outside
// [0, total].
double QoeScore(int64_t n_processed, int64_t n_total);

double PerInferenceScore(double rt, double en, double acc);

// Mean of the scores; geometric mean is 0 when any score is 0.
// ScoringError on an empty span.
double OverallScore(std::span<const double> scenario_scores, MeanKind mean);

struct InferenceScore {
  std::string model;
  int64_t request_index = 0;
  double rt = 0.0;
  double en = 0.0;
  double acc = 0.0;
  double product = 0.0;

  bool operator==(const InferenceScore&) const = default;
};

struct ModelScore {
  std::string model;
  double rt_mean = 0.0;
  double en_mean = 0.0;
  double acc_mean = 0.0;
  double model_score = 0.0;  // 0 when nothing completed
  double qoe = 0.0;
  int64_t n_total = 0;
  int64_t n_processed = 0;
  int64_t n_dropped = 0;
  int64_t n_untriggered = 0;
  int64_t n_sat = 0;
  // False when the model had no user-visible work (every request gated off);
  // such models do not enter the scenario mean.
  bool scored = true;

  bool operator==(const ModelScore&) const = default;
};

struct ScenarioScore {
  std::string scenario;
  std::vector<ModelScore> models;  // scenario entry order
  double score = 0.0;
  std::vector<InferenceScore> inferences;  // completed requests only

  const ModelScore& Model(const std::string& id) const;

  bool operator==(const ScenarioScore&) const = default;
};

/// \brief Streaming aggregation of one scenario's EventLog entries.
///
/// Entries may be observed in any order (e.g. completion order while the
/// simulator runs); a per-model reorder buffer folds them into the running
/// sums in ascending request index.
class ScoreTracker {
 public:
  ScoreTracker(const UsageScenario& scenario, const BenchmarkSuite& catalog,
               const ScoringConfig& config);

  void Observe(const TimelineEntry& entry);

  // ScoringError if some request index is missing from the observed stream.
  ScenarioScore Finish() const;

 private:
  struct Pending {
    EntryStatus status;
    InferenceScore score;
    bool sat;
  };
  struct ModelState {
    std::string id;
    double acc = 0.0;
    int64_t next_index = 0;
    std::map<int64_t, Pending> buffer;
    double rt_sum = 0.0;
    double en_sum = 0.0;
    double acc_sum = 0.0;
    double product_sum = 0.0;
    int64_t n_total = 0;
    int64_t n_processed = 0;
    int64_t n_dropped = 0;
    int64_t n_untriggered = 0;
    int64_t n_sat = 0;
    std::vector<InferenceScore> inferences;
  };

  void Drain(ModelState& m);

  std::string scenario_;
  ScoringConfig config_;
  std::vector<ModelState> models_;
  std::map<std::string, size_t> slot_;
};

ScenarioScore ScoreScenario(const EventLog& log, const UsageScenario& scenario,
                            const BenchmarkSuite& catalog,
                            const ScoringConfig& config);

// Model score alone (mean over completed requests, 0 if none).
double PerModelScore(const EventLog& log, const std::string& model,
                     const UsageScenario& scenario,
                     const BenchmarkSuite& catalog, const ScoringConfig& config);

struct ScoreReport {
  ScoringConfig config;
  std::vector<ScenarioScore> scenarios;
  double overall_arithmetic = 0.0;
  double overall_geometric = 0.0;

  // The configured mean.
  double overall() const;
};

ScoreReport BuildReport(std::vector<ScenarioScore> scenarios,
                        const ScoringConfig& config);

}  // namespace mmmt

#endif  // MMMT_SCORING_H_
