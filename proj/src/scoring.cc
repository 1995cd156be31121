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

#include "mmmt/scoring.h"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace mmmt {

const char* ToString(MeanKind m) {
  return m == MeanKind::kArithmetic ? "arithmetic" : "geometric";
}

MeanKind MeanKindFromString(const std::string& s) {
  if (s == "arithmetic") return MeanKind::kArithmetic;
  if (s == "geometric") return MeanKind::kGeometric;
  throw ConfigError(fmt::format("unknown mean '{}'", s));
}

const char* ToString(ReportScale s) {
  return s == ReportScale::kUnit ? "unit" : "percent";
}

ReportScale ReportScaleFromString(const std::string& s) {
  if (s == "unit") return ReportScale::kUnit;
  if (s == "percent") return ReportScale::kPercent;
  throw ConfigError(fmt::format("unknown report scale '{}'", s));
}

void ScoringConfig::Validate() const {
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw ConfigError(fmt::format("k must be >= 0, got {}", k));
  }
  if (!(e_max_mj > 0.0) || !std::isfinite(e_max_mj)) {
    throw ConfigError(fmt::format("e_max must be > 0, got {}", e_max_mj));
  }
}

double RtScore(double latency_ms, double slack_ms, double k) {
  double x = k * (latency_ms - slack_ms) / 1000.0;
  x = std::clamp(x, -700.0, 700.0);
  return 1.0 / (1.0 + std::exp(x));
}

double EnergyScore(double energy_mj, double e_max_mj) {
  if (!(e_max_mj > 0.0)) {
    throw ScoringError(fmt::format("e_max must be > 0, got {}", e_max_mj));
  }
  if (!(energy_mj >= 0.0) || energy_mj > e_max_mj) {
    throw ScoringError(fmt::format("energy {} mJ outside [0, e_max = {} mJ]",
                                   energy_mj, e_max_mj));
  }
  return (e_max_mj - energy_mj) / e_max_mj;
}

double AccuracyScore(double achieved, double goal, MetricDirection direction) {
  if (!(goal > 0.0)) {
    throw ScoringError(fmt::format("accuracy goal must be > 0, got {}", goal));
  }
  double ratio;
  if (direction == MetricDirection::kHigherIsBetter) {
    ratio = achieved / goal;
  } else {
    if (!(achieved > 0.0)) {
      throw ScoringError(
          fmt::format("achieved error must be > 0, got {}", achieved));
    }
    ratio = goal / achieved;
  }
  return std::clamp(ratio, 0.0, 1.0);
}

double QoeScore(int64_t n_processed, int64_t n_total) {
  if (n_total <= 0) {
    throw ScoringError(fmt::format("QoE needs n_total > 0, got {}", n_total));
  }
  if (n_processed < 0 || n_processed > n_total) {
    throw ScoringError(fmt::format("n_processed {} outside [0, {}]",
                                   n_processed, n_total));
  }
  return static_cast<double>(n_processed) / static_cast<double>(n_total);
}

double PerInferenceScore(double rt, double en, double acc) {
  return rt * en * acc;
}

double OverallScore(std::span<const double> scenario_scores, MeanKind mean) {
  if (scenario_scores.empty()) {
    throw ScoringError("overall score over zero scenarios");
  }
  const double n = static_cast<double>(scenario_scores.size());
  if (mean == MeanKind::kArithmetic) {
    double sum = 0.0;
    for (double s : scenario_scores) sum += s;
    return sum / n;
  }
  double log_sum = 0.0;
  for (double s : scenario_scores) {
    if (s <= 0.0) return 0.0;
    log_sum += std::log(s);
  }
  return std::exp(log_sum / n);
}

const ModelScore& ScenarioScore::Model(const std::string& id) const {
  for (const auto& m : models) {
    if (m.model == id) return m;
  }
  throw ConfigError(fmt::format("scenario {} has no model '{}'", scenario, id));
}

ScoreTracker::ScoreTracker(const UsageScenario& scenario,
                           const BenchmarkSuite& catalog,
                           const ScoringConfig& config)
    : scenario_(scenario.id), config_(config) {
  config_.Validate();
  for (const auto& e : scenario.entries) {
    const UnitModel& model = catalog.Model(e.model);
    ModelState m;
    m.id = e.id;
    m.acc = AccuracyScore(AchievedMetric(model), AccuracyGoal(model),
                          model.metric_direction);
    slot_[e.id] = models_.size();
    models_.push_back(std::move(m));
  }
}

void ScoreTracker::Observe(const TimelineEntry& entry) {
  auto it = slot_.find(entry.request.model);
  if (it == slot_.end()) {
    throw ScoringError(fmt::format("entry for unknown model '{}'",
                                   entry.request.model));
  }
  ModelState& m = models_[it->second];
  Pending p{entry.status, {}, false};
  if (entry.completed()) {
    InferenceScore& s = p.score;
    s.model = m.id;
    s.request_index = entry.request.request_index;
    s.rt = RtScore(ToMillis(entry.t_end - entry.request.t_req),
                   ToMillis(entry.request.t_dl - entry.request.t_req),
                   config_.k);
    s.en = EnergyScore(entry.energy_mj, config_.e_max_mj);
    s.acc = m.acc;
    s.product = PerInferenceScore(s.rt, s.en, s.acc);
    p.sat = entry.t_end <= entry.request.t_dl;
  }
  if (!m.buffer.emplace(entry.request.request_index, std::move(p)).second ||
      entry.request.request_index < m.next_index) {
    throw ScoringError(fmt::format("{}#{} observed twice", m.id,
                                   entry.request.request_index));
  }
  Drain(m);
}

void ScoreTracker::Drain(ModelState& m) {
  for (auto it = m.buffer.find(m.next_index); it != m.buffer.end();
       it = m.buffer.find(m.next_index)) {
    Pending& p = it->second;
    ++m.n_total;
    switch (p.status) {
      case EntryStatus::kCompleted:
        ++m.n_processed;
        if (p.sat) ++m.n_sat;
        m.rt_sum += p.score.rt;
        m.en_sum += p.score.en;
        m.acc_sum += p.score.acc;
        m.product_sum += p.score.product;
        m.inferences.push_back(std::move(p.score));
        break;
      case EntryStatus::kDropped: ++m.n_dropped; break;
      case EntryStatus::kUntriggered: ++m.n_untriggered; break;
    }
    m.buffer.erase(it);
    ++m.next_index;
  }
}

ScenarioScore ScoreTracker::Finish() const {
  ScenarioScore out;
  out.scenario = scenario_;
  double sum = 0.0;
  int scored = 0;
  for (const auto& m : models_) {
    if (!m.buffer.empty()) {
      throw ScoringError(fmt::format("{}: request {} never observed", m.id,
                                     m.next_index));
    }
    ModelScore s;
    s.model = m.id;
    s.n_total = m.n_total;
    s.n_processed = m.n_processed;
    s.n_dropped = m.n_dropped;
    s.n_untriggered = m.n_untriggered;
    s.n_sat = m.n_sat;
    if (m.n_processed > 0) {
      const double n = static_cast<double>(m.n_processed);
      s.rt_mean = m.rt_sum / n;
      s.en_mean = m.en_sum / n;
      s.acc_mean = m.acc_sum / n;
      s.model_score = m.product_sum / n;
    }
    const int64_t denom =
        config_.count_untriggered_in_total ? m.n_total
                                           : m.n_total - m.n_untriggered;
    s.scored = denom > 0;
    if (s.scored) {
      s.qoe = QoeScore(m.n_processed, denom);
      sum += s.model_score * s.qoe;
      ++scored;
    }
    out.inferences.insert(out.inferences.end(), m.inferences.begin(),
                          m.inferences.end());
    out.models.push_back(std::move(s));
  }
  out.score = scored > 0 ? sum / static_cast<double>(scored) : 0.0;
  return out;
}

ScenarioScore ScoreScenario(const EventLog& log, const UsageScenario& scenario,
                            const BenchmarkSuite& catalog,
                            const ScoringConfig& config) {
  ScoreTracker tracker(scenario, catalog, config);
  for (const auto& e : log.entries) tracker.Observe(e);
  return tracker.Finish();
}

double PerModelScore(const EventLog& log, const std::string& model,
                     const UsageScenario& scenario,
                     const BenchmarkSuite& catalog,
                     const ScoringConfig& config) {
  return ScoreScenario(log, scenario, catalog, config).Model(model).model_score;
}

double ScoreReport::overall() const {
  return config.overall_mean == MeanKind::kArithmetic ? overall_arithmetic
                                                      : overall_geometric;
}

ScoreReport BuildReport(std::vector<ScenarioScore> scenarios,
                        const ScoringConfig& config) {
  ScoreReport report;
  report.config = config;
  report.scenarios = std::move(scenarios);
  std::vector<double> scores;
  for (const auto& s : report.scenarios) scores.push_back(s.score);
  report.overall_arithmetic = OverallScore(scores, MeanKind::kArithmetic);
  report.overall_geometric = OverallScore(scores, MeanKind::kGeometric);
  return report;
}

}  // namespace mmmt
