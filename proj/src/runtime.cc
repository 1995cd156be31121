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

#include "mmmt/runtime.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

#include <fmt/core.h>

namespace mmmt {

const char* ToString(EntryStatus s) {
  switch (s) {
    case EntryStatus::kCompleted: return "completed";
    case EntryStatus::kDropped: return "dropped";
    case EntryStatus::kUntriggered: return "untriggered";
  }
  return "?";
}

EntryStatus EntryStatusFromString(const std::string& s) {
  if (s == "completed") return EntryStatus::kCompleted;
  if (s == "dropped") return EntryStatus::kDropped;
  if (s == "untriggered") return EntryStatus::kUntriggered;
  throw ConfigError(fmt::format("unknown entry status '{}'", s));
}

const char* ToString(ScheduleViolationKind k) {
  switch (k) {
    case ScheduleViolationKind::kOccupancy: return "occupancy";
    case ScheduleViolationKind::kDependency: return "dependency";
    case ScheduleViolationKind::kEarlyStart: return "early start";
  }
  return "?";
}

const ModelCounts& EventLog::Counts(const std::string& model) const {
  for (const auto& c : counts) {
    if (c.model == model) return c;
  }
  throw ConfigError(fmt::format("event log has no model '{}'", model));
}

std::vector<ModelCounts> CountEntries(const std::vector<TimelineEntry>& entries,
                                      const UsageScenario& scenario) {
  std::vector<ModelCounts> counts;
  std::unordered_map<std::string, size_t> slot;
  for (const auto& e : scenario.entries) {
    slot[e.id] = counts.size();
    counts.push_back(ModelCounts{e.id});
  }
  for (const auto& e : entries) {
    auto it = slot.find(e.request.model);
    if (it == slot.end()) continue;
    ModelCounts& c = counts[it->second];
    ++c.n_total;
    switch (e.status) {
      case EntryStatus::kCompleted:
        ++c.n_processed;
        if (e.t_end <= e.request.t_dl) ++c.n_sat;
        break;
      case EntryStatus::kDropped: ++c.n_dropped; break;
      case EntryStatus::kUntriggered: ++c.n_untriggered; break;
    }
  }
  return counts;
}

bool EvalControlGate(const DependencyEdge& edge, int64_t frame_index,
                     uint64_t seed) {
  if (edge.trigger_probability >= 1.0) return true;
  if (edge.trigger_probability <= 0.0) return false;
  return DetRand(seed, edge.Id(), frame_index) < edge.trigger_probability;
}

std::optional<int64_t> UpstreamFrame(const ScenarioEntry& up,
                                     const ScenarioEntry& down,
                                     int64_t down_frame,
                                     const BenchmarkSuite& catalog) {
  const double up_rate =
      PrimarySource(catalog.Model(up.model), catalog).streaming_rate;
  const double down_rate =
      PrimarySource(catalog.Model(down.model), catalog).streaming_rate;
  int64_t bound = down_frame;
  if (up_rate != down_rate) {
    bound = static_cast<int64_t>(
        std::floor(static_cast<double>(down_frame) * up_rate / down_rate));
  }
  if (bound < 0) return std::nullopt;
  return bound;
}

std::vector<InferenceRequest> DropSuperseded(
    std::vector<InferenceRequest>& queue, const InferenceRequest& arriving) {
  std::vector<InferenceRequest> dropped;
  auto superseded = [&](const InferenceRequest& r) {
    return r.model == arriving.model && r.request_index < arriving.request_index;
  };
  for (const auto& r : queue) {
    if (superseded(r)) dropped.push_back(r);
  }
  std::erase_if(queue, superseded);
  return dropped;
}

// ---------------------------------------------------------------------------
// Scheduling policies.

size_t LatencyGreedyPolicy::Pick(std::span<const ReadyRequest> ready,
                                 const HardwareUnit& unit,
                                 const CostTable& costs) {
  size_t best = 0;
  auto key = [&](const ReadyRequest& r) {
    return std::make_tuple(
        costs.Lookup(std::string(r.unit_model), unit.id).latency_ms,
        r.request->t_dl, std::string_view(r.request->model),
        r.request->frame_index);
  };
  auto best_key = key(ready[0]);
  for (size_t i = 1; i < ready.size(); ++i) {
    auto k = key(ready[i]);
    if (k < best_key) {
      best = i;
      best_key = k;
    }
  }
  return best;
}

void RoundRobinPolicy::Reset(const UsageScenario& scenario,
                             const HardwareSystem& hw) {
  models_.clear();
  for (const auto& e : scenario.entries) models_.push_back(e.id);
  unit_ids_.clear();
  for (const auto& u : hw.units) unit_ids_.push_back(u.id);
  cursors_.assign(unit_ids_.size(), -1);
}

int RoundRobinPolicy::cursor(const std::string& unit_id) const {
  for (size_t i = 0; i < unit_ids_.size(); ++i) {
    if (unit_ids_[i] == unit_id) return cursors_[i];
  }
  return -1;
}

size_t RoundRobinPolicy::Pick(std::span<const ReadyRequest> ready,
                              const HardwareUnit& unit, const CostTable&) {
  size_t u = 0;
  while (u < unit_ids_.size() && unit_ids_[u] != unit.id) ++u;
  if (u == unit_ids_.size()) {
    unit_ids_.push_back(unit.id);
    cursors_.push_back(-1);
  }
  const int n = static_cast<int>(models_.size());
  for (int step = 1; step <= n; ++step) {
    const int m = (cursors_[u] + step + n) % n;
    std::optional<size_t> pick;
    for (size_t i = 0; i < ready.size(); ++i) {
      if (ready[i].request->model != models_[m]) continue;
      if (!pick || ready[i].request->frame_index <
                       ready[*pick].request->frame_index) {
        pick = i;
      }
    }
    if (pick) {
      cursors_[u] = m;
      return *pick;
    }
  }
  // Models outside the configured list: fall back to the earliest frame.
  return 0;
}

std::unique_ptr<SchedulerPolicy> MakePolicy(std::string_view name) {
  if (name == "latency-greedy") return std::make_unique<LatencyGreedyPolicy>();
  if (name == "round-robin") return std::make_unique<RoundRobinPolicy>();
  throw ConfigError(fmt::format("unknown scheduler policy '{}'", name));
}

// ---------------------------------------------------------------------------
// Simulator.

namespace {

enum class Phase { kPending, kWaiting, kRunning, kFinal };

struct RequestState {
  Phase phase = Phase::kPending;
  int unresolved = 0;  // upstream requests not yet completed
  bool orphan = false;  // some edge has no upstream frame at all
  std::vector<std::pair<size_t, const DependencyEdge*>> downstream;
  size_t unit = 0;
  TimelineEntry entry;
};

enum EventKind : int { kCompletion = 0, kArrival = 1 };

struct Event {
  Time t;
  int kind;
  size_t seq;
  size_t req;

  bool operator>(const Event& o) const {
    return std::tie(t, kind, seq) > std::tie(o.t, o.kind, o.seq);
  }
};

class Simulator {
 public:
  Simulator(const UsageScenario& scenario, const BenchmarkSuite& catalog,
            const RequestStream& stream, const HardwareSystem& hw,
            const CostTable& costs, SchedulerPolicy& policy, uint64_t seed,
            const EntryObserver& observer)
      : scenario_(scenario),
        catalog_(catalog),
        stream_(stream),
        hw_(hw),
        costs_(costs),
        policy_(policy),
        seed_(seed),
        observer_(observer) {}

  EventLog Run();

 private:
  void Setup();
  void HandleArrival(size_t i);
  void HandleCompletion(size_t i);
  void Dispatch(Time now);
  void Close();
  void Finalize(size_t i, EntryStatus status);
  void RemoveFromQueue(size_t i);

  const UsageScenario& scenario_;
  const BenchmarkSuite& catalog_;
  const RequestStream& stream_;
  const HardwareSystem& hw_;
  const CostTable& costs_;
  SchedulerPolicy& policy_;
  uint64_t seed_;
  const EntryObserver& observer_;

  std::vector<RequestState> state_;
  std::unordered_map<std::string, std::vector<size_t>> by_model_;
  std::unordered_map<std::string, std::string> unit_model_;
  std::unordered_map<std::string, int64_t> triggered_;
  // Arrived, not launched, not final.
  std::vector<InferenceRequest> queue_;
  std::vector<size_t> unit_order_;
  std::vector<bool> busy_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  size_t seq_ = 0;
  bool closed_ = false;
};

void Simulator::Setup() {
  ValidateHardware(hw_);
  RequireCosts(costs_, scenario_, hw_);
  TopologicalOrder(scenario_);  // throws on cycles

  for (const auto& e : scenario_.entries) unit_model_[e.id] = e.model;

  state_.resize(stream_.requests.size());
  for (size_t i = 0; i < stream_.requests.size(); ++i) {
    const InferenceRequest& r = stream_.requests[i];
    if (!unit_model_.count(r.model)) {
      throw ConfigError(fmt::format("stream request for '{}' is not part of "
                                    "scenario {}",
                                    r.model, scenario_.id));
    }
    auto& slots = by_model_[r.model];
    if (static_cast<size_t>(r.request_index) >= slots.size()) {
      slots.resize(r.request_index + 1, SIZE_MAX);
    }
    slots[r.request_index] = i;
    state_[i].entry.request = r;
  }

  // Link each downstream request to the upstream request whose output it
  // consumes.
  for (const auto& down : scenario_.entries) {
    for (const auto& edge : down.dependencies) {
      const ScenarioEntry& up = *scenario_.FindEntry(edge.upstream);
      const auto& ups = by_model_[up.id];
      // Both slot lists are in frame order, so the match only moves forward.
      size_t next = 0;
      std::optional<size_t> latest;
      for (size_t di : by_model_[down.id]) {
        if (di == SIZE_MAX) continue;
        auto bound = UpstreamFrame(up, down,
                                   stream_.requests[di].frame_index, catalog_);
        std::optional<size_t> match;
        if (bound) {
          for (; next < ups.size(); ++next) {
            if (ups[next] == SIZE_MAX) continue;
            if (stream_.requests[ups[next]].frame_index > *bound) break;
            latest = ups[next];
          }
          match = latest;
        }
        if (!match) {
          state_[di].orphan = true;
          continue;
        }
        state_[*match].downstream.emplace_back(di, &edge);
        ++state_[di].unresolved;
      }
    }
  }

  unit_order_.resize(hw_.units.size());
  for (size_t u = 0; u < unit_order_.size(); ++u) unit_order_[u] = u;
  std::sort(unit_order_.begin(), unit_order_.end(), [&](size_t a, size_t b) {
    return hw_.units[a].id < hw_.units[b].id;
  });
  busy_.assign(hw_.units.size(), false);

  for (size_t i = 0; i < stream_.requests.size(); ++i) {
    events_.push({stream_.requests[i].t_req, kArrival, seq_++, i});
  }
  policy_.Reset(scenario_, hw_);
}

void Simulator::RemoveFromQueue(size_t i) {
  const InferenceRequest& r = stream_.requests[i];
  std::erase_if(queue_, [&](const InferenceRequest& q) {
    return q.model == r.model && q.request_index == r.request_index;
  });
}

void Simulator::Finalize(size_t i, EntryStatus status) {
  RequestState& s = state_[i];
  if (s.phase == Phase::kFinal) return;
  if (s.phase == Phase::kRunning && status != EntryStatus::kCompleted) return;
  if (s.phase == Phase::kWaiting) RemoveFromQueue(i);
  s.phase = Phase::kFinal;
  s.entry.status = status;
  if (status != EntryStatus::kCompleted) {
    s.entry.unit.clear();
    s.entry.t_start = Time(0);
    s.entry.t_end = Time(0);
    s.entry.energy_mj = 0.0;
  }
  if (observer_) observer_(s.entry);
  if (status == EntryStatus::kCompleted) return;
  // Nothing downstream can run without this request's output.
  for (const auto& [d, edge] : s.downstream) Finalize(d, status);
}

void Simulator::HandleArrival(size_t i) {
  const InferenceRequest& r = stream_.requests[i];
  for (const auto& dropped : DropSuperseded(queue_, r)) {
    Finalize(by_model_[dropped.model][dropped.request_index],
             EntryStatus::kDropped);
  }
  RequestState& s = state_[i];
  if (s.phase != Phase::kPending) return;
  if (s.orphan) {
    Finalize(i, EntryStatus::kUntriggered);
    return;
  }
  // A later request of this model already arrived: this one is stale.
  const auto& slots = by_model_[r.model];
  for (size_t k = r.request_index + 1; k < slots.size(); ++k) {
    if (slots[k] != SIZE_MAX && state_[slots[k]].phase != Phase::kPending) {
      Finalize(i, EntryStatus::kDropped);
      return;
    }
  }
  s.phase = Phase::kWaiting;
  queue_.push_back(r);
}

void Simulator::HandleCompletion(size_t i) {
  RequestState& s = state_[i];
  busy_[s.unit] = false;
  Finalize(i, EntryStatus::kCompleted);
  for (const auto& [d, edge] : s.downstream) {
    const InferenceRequest& dr = stream_.requests[d];
    const bool fires = EvalControlGate(*edge, dr.frame_index, seed_);
    if (fires) ++triggered_[dr.model];
    if (state_[d].phase == Phase::kFinal) continue;
    if (fires) {
      --state_[d].unresolved;
    } else {
      Finalize(d, EntryStatus::kUntriggered);
    }
  }
}

void Simulator::Dispatch(Time now) {
  for (size_t u : unit_order_) {
    if (busy_[u]) continue;
    std::vector<ReadyRequest> ready;
    std::vector<size_t> ready_idx;
    for (const auto& q : queue_) {
      size_t idx = by_model_[q.model][q.request_index];
      if (state_[idx].unresolved != 0) continue;
      ready_idx.push_back(idx);
    }
    if (ready_idx.empty()) return;
    std::sort(ready_idx.begin(), ready_idx.end());
    for (size_t idx : ready_idx) {
      const InferenceRequest& r = stream_.requests[idx];
      ready.push_back({&r, unit_model_[r.model]});
    }
    const HardwareUnit& unit = hw_.units[u];
    size_t pick = policy_.Pick(ready, unit, costs_);
    if (pick >= ready.size()) {
      throw std::logic_error(fmt::format("policy {} picked index {} of {}",
                                         policy_.name(), pick, ready.size()));
    }
    size_t idx = ready_idx[pick];
    RequestState& s = state_[idx];
    const CostEntry& cost =
        costs_.Lookup(unit_model_[stream_.requests[idx].model], unit.id);
    RemoveFromQueue(idx);
    s.phase = Phase::kRunning;
    s.unit = u;
    s.entry.unit = unit.id;
    s.entry.t_start = now;
    s.entry.t_end = now + std::max(Time(1), FromMillis(cost.latency_ms));
    s.entry.energy_mj = cost.energy_mj;
    busy_[u] = true;
    events_.push({s.entry.t_end, kCompletion, seq_++, idx});
  }
}

void Simulator::Close() {
  closed_ = true;
  for (size_t i = 0; i < state_.size(); ++i) {
    if (state_[i].phase == Phase::kPending || state_[i].phase == Phase::kWaiting) {
      Finalize(i, EntryStatus::kDropped);
    }
  }
}

EventLog Simulator::Run() {
  Setup();
  const Time window_end = FromMillis(stream_.duration_s * 1000.0);
  while (true) {
    if (events_.empty()) {
      if (!closed_) Close();
      break;
    }
    const Time now = events_.top().t;
    if (!closed_ && now > window_end) {
      Close();
      continue;
    }
    while (!events_.empty() && events_.top().t == now) {
      Event ev = events_.top();
      events_.pop();
      if (ev.kind == kCompletion) {
        HandleCompletion(ev.req);
      } else if (!closed_) {
        HandleArrival(ev.req);
      }
    }
    if (!closed_) Dispatch(now);
  }

  EventLog log;
  log.scenario = scenario_.id;
  log.hardware = hw_.id;
  log.seed = seed_;
  log.duration_s = stream_.duration_s;
  log.entries.reserve(state_.size());
  for (auto& s : state_) log.entries.push_back(std::move(s.entry));
  log.counts = CountEntries(log.entries, scenario_);
  for (auto& c : log.counts) c.n_triggered = triggered_[c.model];
  return log;
}

}  // namespace

EventLog Simulate(const UsageScenario& scenario, const BenchmarkSuite& catalog,
                  const RequestStream& stream, const HardwareSystem& hw,
                  const CostTable& costs, SchedulerPolicy& policy,
                  uint64_t seed, const EntryObserver& observer) {
  if (stream.scenario != scenario.id) {
    throw ConfigError(fmt::format("stream was generated for scenario {}, not {}",
                                  stream.scenario, scenario.id));
  }
  Simulator sim(scenario, catalog, stream, hw, costs, policy, seed, observer);
  return sim.Run();
}

// ---------------------------------------------------------------------------
// Schedule validation.

std::vector<ScheduleViolation> ValidateSchedule(const EventLog& log,
                                                const UsageScenario& scenario,
                                                const BenchmarkSuite& catalog) {
  std::vector<ScheduleViolation> out;

  std::map<std::string, std::vector<const TimelineEntry*>> per_unit;
  std::map<std::string, std::map<int64_t, const TimelineEntry*>> by_frame;
  for (const auto& e : log.entries) {
    by_frame[e.request.model][e.request.frame_index] = &e;
    if (!e.completed()) continue;
    per_unit[e.unit].push_back(&e);
    if (e.t_start < e.request.t_req) {
      out.push_back({ScheduleViolationKind::kEarlyStart,
                     fmt::format("{}#{} starts at {:.3f} ms before its request "
                                 "at {:.3f} ms",
                                 e.request.model, e.request.request_index,
                                 ToMillis(e.t_start), ToMillis(e.request.t_req))});
    }
  }

  for (auto& [unit, list] : per_unit) {
    std::sort(list.begin(), list.end(),
              [](const TimelineEntry* a, const TimelineEntry* b) {
                return std::tie(a->t_start, a->t_end) <
                       std::tie(b->t_start, b->t_end);
              });
    for (size_t i = 1; i < list.size(); ++i) {
      if (list[i]->t_start < list[i - 1]->t_end) {
        out.push_back({ScheduleViolationKind::kOccupancy,
                       fmt::format("unit {}: {}#{} starts at {:.3f} ms while "
                                   "{}#{} runs until {:.3f} ms",
                                   unit, list[i]->request.model,
                                   list[i]->request.request_index,
                                   ToMillis(list[i]->t_start),
                                   list[i - 1]->request.model,
                                   list[i - 1]->request.request_index,
                                   ToMillis(list[i - 1]->t_end))});
      }
    }
  }

  for (const auto& down : scenario.entries) {
    for (const auto& edge : down.dependencies) {
      const ScenarioEntry* up = scenario.FindEntry(edge.upstream);
      if (up == nullptr) continue;
      const auto& ups = by_frame[up->id];
      for (const auto& [frame, d] : by_frame[down.id]) {
        if (!d->completed()) continue;
        auto bound = UpstreamFrame(*up, down, frame, catalog);
        const TimelineEntry* u = nullptr;
        if (bound) {
          auto it = ups.upper_bound(*bound);
          if (it != ups.begin()) u = std::prev(it)->second;
        }
        if (u == nullptr || !u->completed()) {
          out.push_back({ScheduleViolationKind::kDependency,
                         fmt::format("{}#{} ran but upstream {} for frame {} "
                                     "did not complete",
                                     d->request.model, d->request.request_index,
                                     up->id, frame)});
        } else if (d->t_start < u->t_end) {
          out.push_back({ScheduleViolationKind::kDependency,
                         fmt::format("{}#{} starts at {:.3f} ms before {}#{} "
                                     "ends at {:.3f} ms",
                                     d->request.model, d->request.request_index,
                                     ToMillis(d->t_start), u->request.model,
                                     u->request.request_index,
                                     ToMillis(u->t_end))});
        }
      }
    }
  }
  return out;
}

}  // namespace mmmt
