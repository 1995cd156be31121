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

#include "mmmt/loadgen.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include <boost/math/special_functions/erf.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

namespace mmmt {
namespace {

constexpr double kJitterSigma = 1.0 / 6.0;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Time PeriodTicks(int64_t count, double rate) {
  return Time(static_cast<int64_t>(
      std::llround(static_cast<double>(count) * 1e6 / rate)));
}

}  // namespace

int64_t RequestStream::TargetFrameCount(const std::string& model) const {
  for (const auto& [id, n] : target_frame_count) {
    if (id == model) return n;
  }
  throw ConfigError(fmt::format("stream has no model '{}'", model));
}

double DetRand(uint64_t seed, std::string_view key, int64_t frame) {
  uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ Fnv1a(key));
  h = SplitMix64(h ^ static_cast<uint64_t>(frame));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double JitterDistribution(double uniform) {
  if (uniform <= 0.0) return 0.0;
  if (uniform >= 1.0) return 1.0;
  double z = std::sqrt(2.0) * boost::math::erf_inv(2.0 * uniform - 1.0);
  return std::clamp(0.5 + kJitterSigma * z, 0.0, 1.0);
}

double JitterFromVariate(double max_jitter_ms, double uniform) {
  if (max_jitter_ms == 0.0) return 0.0;
  return max_jitter_ms * 2.0 * (JitterDistribution(uniform) - 0.5);
}

double JitterOffsetMs(const InputSource& source, int64_t frame, uint64_t seed) {
  return JitterFromVariate(source.max_jitter_ms,
                           DetRand(seed, source.id, frame));
}

Time RequestTime(const InputSource& source, int64_t frame, uint64_t seed) {
  return FromMillis(source.init_latency_ms) +
         PeriodTicks(frame, source.streaming_rate) +
         FromMillis(JitterOffsetMs(source, frame, seed));
}

Time Deadline(const ScenarioEntry& entry, int64_t request_index,
              double init_latency_ms) {
  return FromMillis(init_latency_ms) +
         PeriodTicks(request_index + 1, entry.target_rate);
}

bool FrameSelected(int64_t frame, double target_rate, double stream_rate) {
  // (i * r) is exact for integral rates, so the quotient floors correctly.
  double next = std::floor(static_cast<double>(frame + 1) * target_rate / stream_rate);
  double cur = std::floor(static_cast<double>(frame) * target_rate / stream_rate);
  return next > cur;
}

const InputSource& PrimarySource(const UnitModel& model,
                                 const BenchmarkSuite& catalog) {
  if (model.input_sources.empty()) {
    throw ConfigError(fmt::format("model {} has no input source", model.id));
  }
  const InputSource* best = &catalog.Source(model.input_sources.front());
  for (const auto& id : model.input_sources) {
    const InputSource& s = catalog.Source(id);
    if (s.streaming_rate < best->streaming_rate) best = &s;
  }
  return *best;
}

Time ModelRequestTime(const UnitModel& model, const BenchmarkSuite& catalog,
                      int64_t frame, uint64_t seed) {
  const InputSource& primary = PrimarySource(model, catalog);
  Time latest = Time::min();
  for (const auto& id : model.input_sources) {
    const InputSource& s = catalog.Source(id);
    int64_t aligned = frame;
    if (s.streaming_rate != primary.streaming_rate) {
      aligned = static_cast<int64_t>(std::floor(
          static_cast<double>(frame) * s.streaming_rate / primary.streaming_rate));
    }
    latest = std::max(latest, RequestTime(s, aligned, seed));
  }
  return latest;
}

RequestStream GenerateRequests(const UsageScenario& scenario,
                               const BenchmarkSuite& catalog,
                               double duration_s, uint64_t seed) {
  if (!(duration_s > 0.0)) {
    throw ConfigError(fmt::format("duration must be > 0, got {}", duration_s));
  }
  auto violations = ValidateScenario(scenario, catalog);
  if (!violations.empty()) throw ConfigError(violations.front().message);

  RequestStream stream;
  stream.scenario = scenario.id;
  stream.duration_s = duration_s;
  stream.seed = seed;

  for (const auto& entry : scenario.entries) {
    const UnitModel& model = catalog.Model(entry.model);
    const InputSource& primary = PrimarySource(model, catalog);
    double init_ms = 0.0;
    for (const auto& id : model.input_sources) {
      init_ms = std::max(init_ms, catalog.Source(id).init_latency_ms);
    }

    const int64_t target = std::llround(entry.target_rate * duration_s);
    stream.target_frame_count.emplace_back(entry.id, target);

    int64_t k = 0;
    for (int64_t frame = 0; k < target; ++frame) {
      if (!FrameSelected(frame, entry.target_rate, primary.streaming_rate)) {
        continue;
      }
      InferenceRequest r;
      r.model = entry.id;
      r.frame_index = frame;
      r.request_index = k;
      r.t_req = ModelRequestTime(model, catalog, frame, seed);
      r.t_dl = Deadline(entry, k, init_ms);
      stream.requests.push_back(std::move(r));
      ++k;
    }
  }

  std::stable_sort(stream.requests.begin(), stream.requests.end(),
                   [](const InferenceRequest& a, const InferenceRequest& b) {
                     return std::tie(a.t_req, a.model, a.frame_index) <
                            std::tie(b.t_req, b.model, b.frame_index);
                   });
  return stream;
}

void WriteRequestCsv(std::ostream& os, const RequestStream& stream) {
  os << "model,request_index,frame_index,t_req_ms,t_dl_ms\n";
  for (const auto& r : stream.requests) {
    fmt::print(os, "{},{},{},{:.3f},{:.3f}\n", r.model, r.request_index,
               r.frame_index, ToMillis(r.t_req), ToMillis(r.t_dl));
  }
}

}  // namespace mmmt
