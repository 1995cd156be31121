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

#include "mmmt/costmodel.h"

#include <cmath>
#include <set>

#include <fmt/core.h>

namespace mmmt {

const char* ToString(SystemStyle s) {
  switch (s) {
    case SystemStyle::kFDA: return "FDA";
    case SystemStyle::kSFDA: return "SFDA";
    case SystemStyle::kHDA: return "HDA";
  }
  return "?";
}

SystemStyle SystemStyleFromString(const std::string& s) {
  if (s == "FDA") return SystemStyle::kFDA;
  if (s == "SFDA") return SystemStyle::kSFDA;
  if (s == "HDA") return SystemStyle::kHDA;
  throw ConfigError(fmt::format("unknown system style '{}'", s));
}

const HardwareUnit* HardwareSystem::FindUnit(const std::string& unit_id) const {
  for (const auto& u : units) {
    if (u.id == unit_id) return &u;
  }
  return nullptr;
}

void ValidateHardware(const HardwareSystem& hw) {
  if (hw.units.empty()) {
    throw ConfigError(fmt::format("hardware {}: no units", hw.id));
  }
  if (hw.style == SystemStyle::kFDA && hw.units.size() != 1) {
    throw ConfigError(fmt::format("hardware {}: FDA must have exactly one unit",
                                  hw.id));
  }
  std::set<std::string> ids;
  for (const auto& u : hw.units) {
    if (!ids.insert(u.id).second) {
      throw ConfigError(
          fmt::format("hardware {}: duplicate unit id '{}'", hw.id, u.id));
    }
    if (u.pe_count <= 0) {
      throw ConfigError(fmt::format("hardware {}: unit {} pe_count must be > 0",
                                    hw.id, u.id));
    }
    if (!(u.clock_ghz > 0) || !(u.bandwidth_gbps > 0) ||
        !(u.shared_mem_mib > 0) || !(u.power_watts >= 0)) {
      throw ConfigError(fmt::format(
          "hardware {}: unit {} clock/bandwidth/memory must be > 0", hw.id,
          u.id));
    }
  }
}

CostTable::CostTable(double e_max_mj) : e_max_mj_(e_max_mj) {
  if (!(e_max_mj > 0.0) || !std::isfinite(e_max_mj)) {
    throw ConfigError(fmt::format("e_max_mj must be > 0, got {}", e_max_mj));
  }
}

void CostTable::Add(CostEntry entry) {
  if (!(entry.latency_ms > 0.0) || !std::isfinite(entry.latency_ms)) {
    throw ConfigError(fmt::format("cost ({}, {}): latency_ms must be > 0, got {}",
                                  entry.model, entry.unit, entry.latency_ms));
  }
  if (!(entry.energy_mj >= 0.0)) {
    throw ConfigError(fmt::format("cost ({}, {}): energy_mj must be >= 0, got {}",
                                  entry.model, entry.unit, entry.energy_mj));
  }
  if (entry.energy_mj > e_max_mj_) {
    throw ConfigError(fmt::format(
        "cost ({}, {}): energy {} mJ exceeds e_max {} mJ", entry.model,
        entry.unit, entry.energy_mj, e_max_mj_));
  }
  auto key = std::make_pair(entry.model, entry.unit);
  if (entries_.count(key)) {
    throw ConfigError(
        fmt::format("cost ({}, {}): duplicate entry", entry.model, entry.unit));
  }
  entries_.emplace(std::move(key), std::move(entry));
}

const CostEntry& CostTable::Lookup(const std::string& model,
                                   const std::string& unit) const {
  auto it = entries_.find({model, unit});
  if (it == entries_.end()) {
    throw ConfigError(fmt::format("missing cost entry for model '{}' on unit '{}'",
                                  model, unit));
  }
  return it->second;
}

bool CostTable::Contains(const std::string& model,
                         const std::string& unit) const {
  return entries_.count({model, unit}) != 0;
}

std::vector<CostEntry> CostTable::Entries() const {
  std::vector<CostEntry> out;
  out.reserve(entries_.size());
  for (const auto& [_, e] : entries_) out.push_back(e);
  return out;
}

void RequireCosts(const CostTable& costs, const UsageScenario& scenario,
                  const HardwareSystem& hw) {
  for (const auto& entry : scenario.entries) {
    for (const auto& unit : hw.units) costs.Lookup(entry.model, unit.id);
  }
}

CostEntry SyntheticCost(const UnitModel& model, const HardwareUnit& unit,
                        double efficiency) {
  if (!model.flops) {
    throw ConfigError(
        fmt::format("model {}: synthetic cost needs flops", model.id));
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw ConfigError(fmt::format("efficiency must be in (0, 1], got {}",
                                  efficiency));
  }
  const double ops_per_s =
      static_cast<double>(unit.pe_count) * 2.0 * unit.clock_ghz * 1e9 * efficiency;
  CostEntry e;
  e.model = model.id;
  e.unit = unit.id;
  e.latency_ms = *model.flops / ops_per_s * 1e3;
  e.energy_mj = e.latency_ms * unit.power_watts;
  return e;
}

double SyntheticCostParams::Efficiency(const std::string& dataflow,
                                       const std::string& model) const {
  auto df = efficiency.find(dataflow);
  if (df != efficiency.end()) {
    auto m = df->second.find(model);
    if (m != df->second.end()) return m->second;
    auto star = df->second.find("*");
    if (star != df->second.end()) return star->second;
  }
  return default_efficiency;
}

SyntheticCostParams SyntheticCostParams::Defaults() {
  SyntheticCostParams p;
  p.default_efficiency = 0.5;
  // WS favours wide convolutions, OS small spatial layers, RS sits between.
  p.efficiency["WS"] = {{"*", 0.6}, {"ES", 0.4}, {"GE", 0.4}, {"KD", 0.35},
                        {"SR", 0.3}, {"PD", 0.7}, {"DE", 0.7}};
  p.efficiency["OS"] = {{"*", 0.5}, {"ES", 0.75}, {"GE", 0.7}, {"OD", 0.65},
                        {"PD", 0.4}, {"SR", 0.55}};
  p.efficiency["RS"] = {{"*", 0.55}, {"HT", 0.6}, {"SS", 0.6}, {"KD", 0.5}};
  return p;
}

CostTable SyntheticCostTable(const BenchmarkSuite& suite,
                             const HardwareSystem& hw,
                             const SyntheticCostParams& params,
                             double e_max_mj) {
  CostTable table(e_max_mj);
  for (const auto& model : suite.models) {
    if (!model.flops) continue;
    for (const auto& unit : hw.units) {
      table.Add(SyntheticCost(model, unit,
                              params.Efficiency(unit.dataflow, model.id)));
    }
  }
  return table;
}

namespace {

HardwareUnit MakeUnit(std::string id, std::string dataflow, int pes) {
  HardwareUnit u;
  u.id = std::move(id);
  u.dataflow = std::move(dataflow);
  u.pe_count = pes;
  u.clock_ghz = 1.0;
  u.bandwidth_gbps = 256.0;
  u.shared_mem_mib = 8.0;
  // 0.5 mW per PE at 1 GHz.
  u.power_watts = 0.0005 * pes;
  return u;
}

}  // namespace

HardwareSystem AcceleratorPreset(char style_id, int total_pes) {
  if (total_pes <= 0) {
    throw ConfigError(fmt::format("total_pes must be > 0, got {}", total_pes));
  }
  struct Part {
    const char* dataflow;
    int share;
  };
  SystemStyle style;
  std::vector<Part> parts;
  switch (style_id) {
    case 'A': style = SystemStyle::kFDA; parts = {{"WS", 1}}; break;
    case 'B': style = SystemStyle::kFDA; parts = {{"OS", 1}}; break;
    case 'C': style = SystemStyle::kFDA; parts = {{"RS", 1}}; break;
    case 'D': style = SystemStyle::kSFDA; parts = {{"WS", 1}, {"WS", 1}}; break;
    case 'E': style = SystemStyle::kSFDA; parts = {{"OS", 1}, {"OS", 1}}; break;
    case 'F': style = SystemStyle::kSFDA; parts = {{"RS", 1}, {"RS", 1}}; break;
    case 'G':
      style = SystemStyle::kSFDA;
      parts = {{"WS", 1}, {"WS", 1}, {"WS", 1}, {"WS", 1}};
      break;
    case 'H':
      style = SystemStyle::kSFDA;
      parts = {{"OS", 1}, {"OS", 1}, {"OS", 1}, {"OS", 1}};
      break;
    case 'I':
      style = SystemStyle::kSFDA;
      parts = {{"RS", 1}, {"RS", 1}, {"RS", 1}, {"RS", 1}};
      break;
    case 'J': style = SystemStyle::kHDA; parts = {{"WS", 1}, {"OS", 1}}; break;
    case 'K': style = SystemStyle::kHDA; parts = {{"WS", 3}, {"OS", 1}}; break;
    case 'L': style = SystemStyle::kHDA; parts = {{"WS", 1}, {"OS", 3}}; break;
    case 'M':
      style = SystemStyle::kHDA;
      parts = {{"WS", 1}, {"OS", 1}, {"WS", 1}, {"OS", 1}};
      break;
    default:
      throw ConfigError(fmt::format("unknown accelerator style '{}'", style_id));
  }
  int total_share = 0;
  for (const auto& p : parts) total_share += p.share;

  HardwareSystem hw;
  hw.id = fmt::format("{}_{}k", style_id, total_pes / 1024);
  hw.style = style;
  for (size_t i = 0; i < parts.size(); ++i) {
    hw.units.push_back(MakeUnit(fmt::format("u{}_{}", i, parts[i].dataflow),
                                parts[i].dataflow,
                                total_pes * parts[i].share / total_share));
  }
  return hw;
}

}  // namespace mmmt
