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

// Discrete-event dispatcher. Consumes a RequestStream and produces an
// EventLog: which unit ran each request and when, or why it never ran.
//
// Rules enforced by Simulate():
//  * non-preemptive; one inference per unit at a time;
//  * a request is ready once it has arrived, every upstream request for its
//    frame has completed and every gate on it fired;
//  * when request k+1 of a model arrives while request k has not launched,
//    request k is dropped (and everything downstream of it);
//  * at the end of the window every request that has not launched is dropped;
//    running inferences are allowed to finish.

#ifndef MMMT_RUNTIME_H_
#define MMMT_RUNTIME_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmmt/common.h"
#include "mmmt/costmodel.h"
#include "mmmt/loadgen.h"
#include "mmmt/workload.h"

namespace mmmt {

enum class EntryStatus { kCompleted, kDropped, kUntriggered };

const char* ToString(EntryStatus s);
EntryStatus EntryStatusFromString(const std::string& s);

struct TimelineEntry {
  InferenceRequest request;
  std::string unit;  // empty unless completed
  Time t_start{0};
  Time t_end{0};
  EntryStatus status = EntryStatus::kDropped;
  double energy_mj = 0.0;

  bool completed() const { return status == EntryStatus::kCompleted; }
  Time latency() const { return t_end - request.t_req; }

  bool operator==(const TimelineEntry&) const = default;
};

struct ModelCounts {
  std::string model;
  int64_t n_total = 0;
  int64_t n_processed = 0;
  int64_t n_dropped = 0;
  int64_t n_untriggered = 0;
  int64_t n_sat = 0;        // completed with t_end <= t_dl
  int64_t n_triggered = 0;  // gate evaluations on this model that fired

  bool operator==(const ModelCounts&) const = default;
};

struct EventLog {
  std::string scenario;
  std::string hardware;
  uint64_t seed = 0;
  double duration_s = 0.0;
  // One entry per request, in request-stream order.
  std::vector<TimelineEntry> entries;
  // Scenario entry order.
  std::vector<ModelCounts> counts;

  const ModelCounts& Counts(const std::string& model) const;

  bool operator==(const EventLog&) const = default;
};

// Recomputes `counts` (except n_triggered, which only the simulator knows)
// from `entries` in scenario order.
std::vector<ModelCounts> CountEntries(const std::vector<TimelineEntry>& entries,
                                      const UsageScenario& scenario);

/// \brief What a scheduler sees for each ready request.
struct ReadyRequest {
  const InferenceRequest* request = nullptr;
  std::string_view unit_model;  // UnitModel id, for cost lookups
};

/// \brief Chooses which ready request a free unit runs next. Implementations
/// must be deterministic given identical inputs and internal state.
class SchedulerPolicy {
 public:
  virtual ~SchedulerPolicy() = default;

  virtual std::string name() const = 0;

  // Called once before a simulation starts.
  virtual void Reset(const UsageScenario& scenario, const HardwareSystem& hw) {}

  // `ready` is non-empty. Returns an index into `ready`.
  virtual size_t Pick(std::span<const ReadyRequest> ready,
                      const HardwareUnit& unit, const CostTable& costs) = 0;
};

// Minimal latency on the freeing unit; ties by earlier deadline, then by
// (model id, frame index).
class LatencyGreedyPolicy : public SchedulerPolicy {
 public:
  std::string name() const override { return "latency-greedy"; }
  size_t Pick(std::span<const ReadyRequest> ready, const HardwareUnit& unit,
              const CostTable& costs) override;
};

// Per-unit cursor over the scenario's model list: the next model after the
// one last served that has a ready request wins; lowest frame first.
class RoundRobinPolicy : public SchedulerPolicy {
 public:
  std::string name() const override { return "round-robin"; }
  void Reset(const UsageScenario& scenario, const HardwareSystem& hw) override;
  size_t Pick(std::span<const ReadyRequest> ready, const HardwareUnit& unit,
              const CostTable& costs) override;

  // Index of the model last served on `unit_id`, -1 before the first pick.
  int cursor(const std::string& unit_id) const;

 private:
  std::vector<std::string> models_;
  std::vector<std::string> unit_ids_;
  std::vector<int> cursors_;
};

// "latency-greedy" or "round-robin"; ConfigError otherwise.
std::unique_ptr<SchedulerPolicy> MakePolicy(std::string_view name);

// Invoked once per request, at the moment its status becomes final.
using EntryObserver = std::function<void(const TimelineEntry&)>;

// Throws ConfigError if a (model, unit) cost is missing or the stream does
// not belong to `scenario`.
EventLog Simulate(const UsageScenario& scenario, const BenchmarkSuite& catalog,
                  const RequestStream& stream, const HardwareSystem& hw,
                  const CostTable& costs, SchedulerPolicy& policy,
                  uint64_t seed, const EntryObserver& observer = {});

// Bernoulli(trigger_probability) keyed on (seed, edge, frame).
bool EvalControlGate(const DependencyEdge& edge, int64_t frame_index,
                     uint64_t seed);

// Latest frame of `up`'s primary source whose nominal time (frame / rate)
// does not exceed that of `down_frame` on `down`'s primary source. A
// downstream request consumes the output of the upstream request with the
// greatest frame index <= this bound; nullopt if the bound is negative.
std::optional<int64_t> UpstreamFrame(const ScenarioEntry& up,
                                     const ScenarioEntry& down,
                                     int64_t down_frame,
                                     const BenchmarkSuite& catalog);

// Applies the supersession rule to a queue of not-yet-launched requests:
// every queued request of the arriving request's model with a lower
// request_index is removed and returned.
std::vector<InferenceRequest> DropSuperseded(
    std::vector<InferenceRequest>& queue, const InferenceRequest& arriving);

enum class ScheduleViolationKind { kOccupancy, kDependency, kEarlyStart };

const char* ToString(ScheduleViolationKind k);

struct ScheduleViolation {
  ScheduleViolationKind kind;
  std::string message;
};

// Checks unit occupancy (no overlap), dependency order (downstream starts at
// or after the upstream frame ends) and that nothing starts before t_req.
std::vector<ScheduleViolation> ValidateSchedule(const EventLog& log,
                                                const UsageScenario& scenario,
                                                const BenchmarkSuite& catalog);

}  // namespace mmmt

#endif  // MMMT_RUNTIME_H_
