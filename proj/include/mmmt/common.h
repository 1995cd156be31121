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

#ifndef MMMT_COMMON_H_
#define MMMT_COMMON_H_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmmt {

// Simulation time. All internal arithmetic happens on integer microsecond
// ticks so that runs are bit-reproducible; public interfaces take and return
// milliseconds as doubles.
using Time = std::chrono::microseconds;

inline constexpr int kSchemaVersion = 1;

inline Time FromMillis(double ms) {
  return Time(static_cast<int64_t>(std::llround(ms * 1000.0)));
}

inline double ToMillis(Time t) { return static_cast<double>(t.count()) / 1000.0; }

// Raised for malformed or inconsistent inputs (files, cost tables, flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a scoring precondition is violated (e.g. energy above E_max).
class ScoringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mmmt

#endif  // MMMT_COMMON_H_
