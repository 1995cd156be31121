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

// Hardware description and per-(model, unit) latency/energy costs.
//
// Costs come either from a table (e.g. produced offline by an analytical
// accelerator model) or from a roofline-style synthetic generator. Either
// way the simulator only ever sees a CostTable.

#ifndef MMMT_COSTMODEL_H_
#define MMMT_COSTMODEL_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mmmt/common.h"
#include "mmmt/workload.h"

namespace mmmt {

struct HardwareUnit {
  std::string id;
  std::string dataflow;  // WS, OS, RS or any other tag
  int pe_count = 0;
  double clock_ghz = 1.0;
  double bandwidth_gbps = 256.0;
  double shared_mem_mib = 8.0;
  double power_watts = 1.0;  // used by the synthetic generator only

  bool operator==(const HardwareUnit&) const = default;
};

enum class SystemStyle { kFDA, kSFDA, kHDA };

const char* ToString(SystemStyle s);
SystemStyle SystemStyleFromString(const std::string& s);

struct HardwareSystem {
  std::string id;
  SystemStyle style = SystemStyle::kFDA;
  std::vector<HardwareUnit> units;

  const HardwareUnit* FindUnit(const std::string& unit_id) const;

  bool operator==(const HardwareSystem&) const = default;
};

// Throws ConfigError on: no units, duplicate unit ids, pe_count <= 0,
// non-positive clock/bandwidth/memory, FDA with more than one unit.
void ValidateHardware(const HardwareSystem& hw);

struct CostEntry {
  std::string model;
  std::string unit;
  double latency_ms = 0.0;
  double energy_mj = 0.0;

  bool operator==(const CostEntry&) const = default;
};

/// \brief Immutable-after-load map from (model, unit) to cost, anchored by an
/// energy budget E_max that no entry may exceed.
class CostTable {
 public:
  explicit CostTable(double e_max_mj);

  // Rejects latency <= 0, energy < 0, energy > e_max and duplicate keys.
  void Add(CostEntry entry);

  // Throws ConfigError naming both ids when the pair is missing.
  const CostEntry& Lookup(const std::string& model,
                          const std::string& unit) const;
  bool Contains(const std::string& model, const std::string& unit) const;

  double e_max_mj() const { return e_max_mj_; }
  // Entries ordered by (model, unit).
  std::vector<CostEntry> Entries() const;

  bool operator==(const CostTable&) const = default;

 private:
  double e_max_mj_;
  std::map<std::pair<std::string, std::string>, CostEntry> entries_;
};

// Throws ConfigError if any (model of scenario, unit of hw) pair is absent.
void RequireCosts(const CostTable& costs, const UsageScenario& scenario,
                  const HardwareSystem& hw);

// Roofline: latency = flops / (pe_count * 2 * clock * efficiency);
// energy = latency * unit.power_watts.
CostEntry SyntheticCost(const UnitModel& model, const HardwareUnit& unit,
                        double efficiency);

/// \brief Per-(dataflow, model) efficiency factors for SyntheticCost.
struct SyntheticCostParams {
  double default_efficiency = 0.5;
  // dataflow -> model -> efficiency in (0, 1]
  std::map<std::string, std::map<std::string, double>> efficiency;

  double Efficiency(const std::string& dataflow, const std::string& model) const;

  // Illustrative factors for WS/OS/RS; not measured.
  static SyntheticCostParams Defaults();
};

// Costs for every (model in suite with flops, unit in hw) pair.
CostTable SyntheticCostTable(const BenchmarkSuite& suite,
                             const HardwareSystem& hw,
                             const SyntheticCostParams& params,
                             double e_max_mj);

// Accelerator styles A-M with `total_pes` split across instances:
//   A-C  FDA  WS / OS / RS
//   D-F  SFDA two instances  (WS, OS, RS), 1:1
//   G-I  SFDA four instances (WS, OS, RS), 1:1:1:1
//   J    HDA WS+OS 1:1,  K  WS+OS 3:1,  L  WS+OS 1:3,  M  WS+OS+WS+OS 1:1:1:1
// All units run at 1 GHz with 256 GB/s and 8 MiB shared memory.
HardwareSystem AcceleratorPreset(char style_id, int total_pes);

}  // namespace mmmt

#endif  // MMMT_COSTMODEL_H_
