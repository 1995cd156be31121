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

// Workload description: input sources, unit models, usage scenarios and the
// built-in benchmark suite.

#ifndef MMMT_WORKLOAD_H_
#define MMMT_WORKLOAD_H_

#include <optional>
#include <string>
#include <vector>

#include "mmmt/common.h"

namespace mmmt {

/// \brief A sensor stream feeding one or more models.
struct InputSource {
  std::string id;
  std::string input_type;
  double streaming_rate = 0.0;  // frames per second
  double init_latency_ms = 0.0;
  double max_jitter_ms = 0.0;

  bool operator==(const InputSource&) const = default;
};

enum class MetricDirection { kHigherIsBetter, kLowerIsBetter };

const char* ToString(MetricDirection d);
MetricDirection MetricDirectionFromString(const std::string& s);

/// \brief A unit ML model. Models are never executed here, so the achieved
/// metric is configuration rather than a measurement.
struct UnitModel {
  std::string id;
  std::string task;
  std::vector<std::string> input_sources;
  std::string dataset;
  std::string accuracy_metric_id;
  MetricDirection metric_direction = MetricDirection::kHigherIsBetter;
  // Value reported by the model's original authors.
  double reported_metric = 0.0;
  // Minimum acceptable quality (95% of reported accuracy, or 105% of reported
  // error). Carried for reports; scoring uses AccuracyGoal().
  double accuracy_requirement = 0.0;
  // Unset means "assume the goal is met".
  std::optional<double> achieved_metric;
  std::optional<double> flops;

  bool operator==(const UnitModel&) const = default;
};

// 105% of the reported metric when higher is better, 95% when it is an error.
double AccuracyGoal(const UnitModel& model);

// achieved_metric if configured, otherwise AccuracyGoal(model).
double AchievedMetric(const UnitModel& model);

enum class DependencyKind { kData, kControl };

const char* ToString(DependencyKind k);
DependencyKind DependencyKindFromString(const std::string& s);

struct DependencyEdge {
  std::string upstream;    // scenario entry id
  std::string downstream;  // scenario entry id
  DependencyKind kind = DependencyKind::kData;
  double trigger_probability = 1.0;

  // Stable identifier, "UP->DOWN"; also the key for gate randomness.
  std::string Id() const { return upstream + "->" + downstream; }

  bool operator==(const DependencyEdge&) const = default;
};

/// \brief One active model in a scenario. `id` is the instance id; several
/// instances may share one UnitModel (e.g. one pipeline per eye).
struct ScenarioEntry {
  std::string id;
  std::string model;
  double target_rate = 0.0;  // inferences per second
  std::vector<DependencyEdge> dependencies;

  bool operator==(const ScenarioEntry&) const = default;
};

struct UsageScenario {
  std::string id;
  std::string name;
  std::vector<ScenarioEntry> entries;

  const ScenarioEntry* FindEntry(const std::string& entry_id) const;
  ScenarioEntry* FindEntry(const std::string& entry_id);
  // Finds an edge by its "UP->DOWN" id.
  DependencyEdge* FindEdge(const std::string& edge_id);

  bool operator==(const UsageScenario&) const = default;
};

/// \brief A suite bundles the catalog (sources and models) with the
/// scenarios that reference it.
struct BenchmarkSuite {
  std::vector<InputSource> input_sources;
  std::vector<UnitModel> models;
  std::vector<UsageScenario> scenarios;

  const InputSource* FindSource(const std::string& id) const;
  const UnitModel* FindModel(const std::string& id) const;
  const UsageScenario* FindScenario(const std::string& id) const;

  // Throws ConfigError naming the missing id.
  const InputSource& Source(const std::string& id) const;
  const UnitModel& Model(const std::string& id) const;
  const UsageScenario& Scenario(const std::string& id) const;

  bool operator==(const BenchmarkSuite&) const = default;
};

enum class ViolationKind {
  kUnknownSource,
  kUnknownModel,
  kRateExceedsSource,
  kNonPositiveRate,
  kDanglingDependency,
  kMisattributedDependency,
  kBadTriggerProbability,
  kCycle,
  kDuplicateEntry,
  kDuplicateScenario,
  kEmptyScenario,
  kBadSource,
};

const char* ToString(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
};

// Violations are data: the returned list is empty iff the scenario is valid.
std::vector<Violation> ValidateScenario(const UsageScenario& scenario,
                                        const BenchmarkSuite& catalog);

// Validates every scenario plus suite-level invariants (unique scenario ids,
// sane sources, models referencing declared sources).
std::vector<Violation> ValidateSuite(const BenchmarkSuite& suite);

// The seven usage scenarios, eleven unit models and three input sources of
// the reference benchmark.
BenchmarkSuite BuiltinSuite();

// Topological order of entry ids (upstream first, ties in declaration order).
// Throws ConfigError on cycles.
std::vector<std::string> TopologicalOrder(const UsageScenario& scenario);

}  // namespace mmmt

#endif  // MMMT_WORKLOAD_H_
