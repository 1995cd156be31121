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

// File formats. Every document carries "schema_version"; parse failures
// raise ConfigError with the file (or context) and field that failed.

#ifndef MMMT_IO_H_
#define MMMT_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "mmmt/costmodel.h"
#include "mmmt/runtime.h"
#include "mmmt/scoring.h"
#include "mmmt/workload.h"

namespace mmmt {

using Json = nlohmann::ordered_json;

// Suite file: {schema_version, input_sources[], models[], scenarios[]}.
Json SuiteToJson(const BenchmarkSuite& suite);
BenchmarkSuite SuiteFromJson(const Json& j, const std::string& context);

// Hardware file: {schema_version, id, style, units[], synthetic?}.
Json HardwareToJson(const HardwareSystem& hw,
                    const SyntheticCostParams* synthetic = nullptr);
HardwareSystem HardwareFromJson(const Json& j, const std::string& context);
// Defaults() when the file has no "synthetic" section.
SyntheticCostParams SyntheticParamsFromJson(const Json& j,
                                            const std::string& context);

// Cost-table file: {schema_version, e_max_mj, entries[]}.
Json CostTableToJson(const CostTable& table);
CostTable CostTableFromJson(const Json& j, const std::string& context);

// Event log CSV: a "# schema_version=..." comment line carrying the log
// metadata, then
//   model,request_index,frame_index,unit,t_req,t_start,t_end,t_dl,status,energy_mj
// Times are milliseconds with microsecond resolution; unit and times are
// empty for requests that never ran.
void WriteEventLogCsv(std::ostream& os, const EventLog& log);
// Counts are rebuilt from the rows (n_triggered is not part of the CSV).
EventLog ReadEventLogCsv(std::istream& is, const UsageScenario& scenario,
                         const std::string& context);

Json EventLogToJson(const EventLog& log);

// {schema_version, config, scoring, scenarios{...}, overall{...}}.
// `config` is embedded verbatim.
Json ScoreReportToJson(const ScoreReport& report, const Json& config);

Json ScoringConfigToJson(const ScoringConfig& cfg);

Json ReadJsonFile(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents);

}  // namespace mmmt

#endif  // MMMT_IO_H_
