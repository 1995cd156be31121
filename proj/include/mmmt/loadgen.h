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

// Load generator: turns a usage scenario into a deterministic stream of
// jittered inference requests.

#ifndef MMMT_LOADGEN_H_
#define MMMT_LOADGEN_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmmt/common.h"
#include "mmmt/workload.h"

namespace mmmt {

struct InferenceRequest {
  std::string model;        // scenario entry id
  int64_t frame_index = 0;  // index into the entry's primary source stream
  int64_t request_index = 0;
  Time t_req{0};
  Time t_dl{0};

  Time slack() const { return t_dl - t_req; }

  bool operator==(const InferenceRequest&) const = default;
};

struct RequestStream {
  std::string scenario;
  double duration_s = 0.0;
  uint64_t seed = 0;
  // Sorted by t_req, then (model, frame_index).
  std::vector<InferenceRequest> requests;
  // round(target_rate * duration) per entry, in scenario entry order.
  std::vector<std::pair<std::string, int64_t>> target_frame_count;

  int64_t TargetFrameCount(const std::string& model) const;

  bool operator==(const RequestStream&) const = default;
};

// Pure mixing hash of (seed, key, frame) mapped to [0, 1).
double DetRand(uint64_t seed, std::string_view key, int64_t frame);

// Truncated Gaussian (mean 0.5, sigma 1/6, clamped to [0, 1]) applied to a
// uniform variate.
double JitterDistribution(double uniform);

// max_jitter * 2 * (JitterDistribution(uniform) - 0.5), in [-Jt, +Jt].
double JitterFromVariate(double max_jitter_ms, double uniform);

double JitterOffsetMs(const InputSource& source, int64_t frame, uint64_t seed);

// Arrival time of `frame` on `source`: init latency + frame period + jitter.
Time RequestTime(const InputSource& source, int64_t frame, uint64_t seed);

// L_init + (request_index + 1) / target_rate. Never jittered.
Time Deadline(const ScenarioEntry& entry, int64_t request_index,
              double init_latency_ms);

// Bresenham-style subsampling: frame i of a `stream_rate` source is used by a
// model running at `target_rate` iff floor((i+1)*r/s) > floor(i*r/s).
bool FrameSelected(int64_t frame, double target_rate, double stream_rate);

// The source that drives frame indexing for a (possibly multi-modal) model:
// the slowest source, first declared on ties.
const InputSource& PrimarySource(const UnitModel& model,
                                 const BenchmarkSuite& catalog);

// Arrival time of a multi-modal frame: latest of all aligned source frames.
Time ModelRequestTime(const UnitModel& model, const BenchmarkSuite& catalog,
                      int64_t frame, uint64_t seed);

// Throws ConfigError if the scenario does not validate or duration <= 0.
RequestStream GenerateRequests(const UsageScenario& scenario,
                               const BenchmarkSuite& catalog,
                               double duration_s, uint64_t seed);

// CSV: model,request_index,frame_index,t_req_ms,t_dl_ms
void WriteRequestCsv(std::ostream& os, const RequestStream& stream);

}  // namespace mmmt

#endif  // MMMT_LOADGEN_H_
