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

#include "mmmt/io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/core.h>
#include <fmt/ostream.h>

namespace mmmt {
namespace {

template <typename T>
T Required(const Json& j, const char* field, const std::string& ctx) {
  if (!j.is_object() || !j.contains(field)) {
    throw ConfigError(fmt::format("{}: missing field '{}'", ctx, field));
  }
  try {
    return j.at(field).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(fmt::format("{}: field '{}': {}", ctx, field, e.what()));
  }
}

template <typename T>
T Optional(const Json& j, const char* field, T fallback,
           const std::string& ctx) {
  if (!j.is_object() || !j.contains(field) || j.at(field).is_null()) {
    return fallback;
  }
  return Required<T>(j, field, ctx);
}

const Json& RequiredArray(const Json& j, const char* field,
                          const std::string& ctx) {
  if (!j.is_object() || !j.contains(field) || !j.at(field).is_array()) {
    throw ConfigError(fmt::format("{}: field '{}' must be an array", ctx, field));
  }
  return j.at(field);
}

void CheckSchema(const Json& j, const std::string& ctx) {
  if (!j.is_object()) {
    throw ConfigError(fmt::format("{}: expected a JSON object", ctx));
  }
  int version = Optional<int>(j, "schema_version", kSchemaVersion, ctx);
  if (version != kSchemaVersion) {
    throw ConfigError(fmt::format("{}: schema_version {} is not supported "
                                  "(expected {})",
                                  ctx, version, kSchemaVersion));
  }
}

// Rethrows enum parse failures with context.
template <typename F>
auto WithContext(const std::string& ctx, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", ctx, e.what()));
  }
}

std::string FormatMs(Time t) { return fmt::format("{:.3f}", ToMillis(t)); }

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Json SuiteToJson(const BenchmarkSuite& suite) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json sources = Json::array();
  for (const auto& s : suite.input_sources) {
    sources.push_back({{"id", s.id},
                       {"input_type", s.input_type},
                       {"streaming_rate_fps", s.streaming_rate},
                       {"init_latency_ms", s.init_latency_ms},
                       {"max_jitter_ms", s.max_jitter_ms}});
  }
  j["input_sources"] = std::move(sources);

  Json models = Json::array();
  for (const auto& m : suite.models) {
    Json mj = {{"id", m.id},
               {"task", m.task},
               {"input_sources", m.input_sources},
               {"dataset", m.dataset},
               {"accuracy_metric_id", m.accuracy_metric_id},
               {"metric_direction", ToString(m.metric_direction)},
               {"reported_metric", m.reported_metric},
               {"accuracy_requirement", m.accuracy_requirement}};
    if (m.achieved_metric) mj["achieved_metric"] = *m.achieved_metric;
    if (m.flops) mj["flops"] = *m.flops;
    models.push_back(std::move(mj));
  }
  j["models"] = std::move(models);

  Json scenarios = Json::array();
  for (const auto& sc : suite.scenarios) {
    Json entries = Json::array();
    for (const auto& e : sc.entries) {
      Json deps = Json::array();
      for (const auto& d : e.dependencies) {
        deps.push_back({{"upstream", d.upstream},
                        {"kind", ToString(d.kind)},
                        {"trigger_probability", d.trigger_probability}});
      }
      entries.push_back({{"id", e.id},
                         {"model", e.model},
                         {"target_rate_hz", e.target_rate},
                         {"dependencies", std::move(deps)}});
    }
    scenarios.push_back(
        {{"id", sc.id}, {"name", sc.name}, {"entries", std::move(entries)}});
  }
  j["scenarios"] = std::move(scenarios);
  return j;
}

BenchmarkSuite SuiteFromJson(const Json& j, const std::string& context) {
  CheckSchema(j, context);
  BenchmarkSuite suite;
  const Json& sources = RequiredArray(j, "input_sources", context);
  for (size_t i = 0; i < sources.size(); ++i) {
    const Json& s = sources[i];
    const std::string ctx = fmt::format("{}: input_sources[{}]", context, i);
    InputSource src;
    src.id = Required<std::string>(s, "id", ctx);
    src.input_type = Optional<std::string>(s, "input_type", "", ctx);
    src.streaming_rate = Required<double>(s, "streaming_rate_fps", ctx);
    src.init_latency_ms = Optional<double>(s, "init_latency_ms", 0.0, ctx);
    src.max_jitter_ms = Optional<double>(s, "max_jitter_ms", 0.0, ctx);
    suite.input_sources.push_back(std::move(src));
  }

  const Json& models = RequiredArray(j, "models", context);
  for (size_t i = 0; i < models.size(); ++i) {
    const Json& m = models[i];
    const std::string ctx = fmt::format("{}: models[{}]", context, i);
    UnitModel model;
    model.id = Required<std::string>(m, "id", ctx);
    model.task = Optional<std::string>(m, "task", "", ctx);
    model.input_sources =
        Required<std::vector<std::string>>(m, "input_sources", ctx);
    model.dataset = Optional<std::string>(m, "dataset", "", ctx);
    model.accuracy_metric_id =
        Optional<std::string>(m, "accuracy_metric_id", "", ctx);
    model.metric_direction = WithContext(ctx, [&] {
      return MetricDirectionFromString(
          Optional<std::string>(m, "metric_direction", "higher", ctx));
    });
    model.reported_metric = Required<double>(m, "reported_metric", ctx);
    model.accuracy_requirement =
        Optional<double>(m, "accuracy_requirement", 0.0, ctx);
    if (m.contains("achieved_metric") && !m["achieved_metric"].is_null()) {
      model.achieved_metric = Required<double>(m, "achieved_metric", ctx);
    }
    if (m.contains("flops") && !m["flops"].is_null()) {
      model.flops = Required<double>(m, "flops", ctx);
      if (!(*model.flops > 0.0)) {
        throw ConfigError(fmt::format("{}: field 'flops' must be > 0", ctx));
      }
    }
    suite.models.push_back(std::move(model));
  }

  const Json& scenarios = RequiredArray(j, "scenarios", context);
  for (size_t i = 0; i < scenarios.size(); ++i) {
    const Json& sc = scenarios[i];
    const std::string ctx = fmt::format("{}: scenarios[{}]", context, i);
    UsageScenario scenario;
    scenario.id = Required<std::string>(sc, "id", ctx);
    scenario.name = Optional<std::string>(sc, "name", scenario.id, ctx);
    const Json& entries = RequiredArray(sc, "entries", ctx);
    for (size_t k = 0; k < entries.size(); ++k) {
      const Json& e = entries[k];
      const std::string ectx = fmt::format("{}.entries[{}]", ctx, k);
      ScenarioEntry entry;
      entry.id = Required<std::string>(e, "id", ectx);
      entry.model = Optional<std::string>(e, "model", entry.id, ectx);
      entry.target_rate = Required<double>(e, "target_rate_hz", ectx);
      if (e.contains("dependencies")) {
        const Json& deps = RequiredArray(e, "dependencies", ectx);
        for (size_t d = 0; d < deps.size(); ++d) {
          const std::string dctx = fmt::format("{}.dependencies[{}]", ectx, d);
          DependencyEdge edge;
          edge.upstream = Required<std::string>(deps[d], "upstream", dctx);
          edge.downstream = entry.id;
          edge.kind = WithContext(dctx, [&] {
            return DependencyKindFromString(
                Optional<std::string>(deps[d], "kind", "data", dctx));
          });
          edge.trigger_probability =
              Optional<double>(deps[d], "trigger_probability", 1.0, dctx);
          entry.dependencies.push_back(std::move(edge));
        }
      }
      scenario.entries.push_back(std::move(entry));
    }
    suite.scenarios.push_back(std::move(scenario));
  }
  return suite;
}

Json HardwareToJson(const HardwareSystem& hw,
                    const SyntheticCostParams* synthetic) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = hw.id;
  j["style"] = ToString(hw.style);
  Json units = Json::array();
  for (const auto& u : hw.units) {
    units.push_back({{"id", u.id},
                     {"dataflow", u.dataflow},
                     {"pe_count", u.pe_count},
                     {"clock_ghz", u.clock_ghz},
                     {"bandwidth_gbps", u.bandwidth_gbps},
                     {"shared_mem_mib", u.shared_mem_mib},
                     {"power_watts", u.power_watts}});
  }
  j["units"] = std::move(units);
  if (synthetic != nullptr) {
    Json eff = Json::object();
    for (const auto& [df, per_model] : synthetic->efficiency) {
      Json m = Json::object();
      for (const auto& [model, v] : per_model) m[model] = v;
      eff[df] = std::move(m);
    }
    j["synthetic"] = {{"default_efficiency", synthetic->default_efficiency},
                      {"efficiency", std::move(eff)}};
  }
  return j;
}

HardwareSystem HardwareFromJson(const Json& j, const std::string& context) {
  CheckSchema(j, context);
  HardwareSystem hw;
  hw.id = Required<std::string>(j, "id", context);
  hw.style = WithContext(context, [&] {
    return SystemStyleFromString(Required<std::string>(j, "style", context));
  });
  const Json& units = RequiredArray(j, "units", context);
  for (size_t i = 0; i < units.size(); ++i) {
    const std::string ctx = fmt::format("{}: units[{}]", context, i);
    const Json& u = units[i];
    HardwareUnit unit;
    unit.id = Required<std::string>(u, "id", ctx);
    unit.dataflow = Required<std::string>(u, "dataflow", ctx);
    unit.pe_count = Required<int>(u, "pe_count", ctx);
    unit.clock_ghz = Optional<double>(u, "clock_ghz", 1.0, ctx);
    unit.bandwidth_gbps = Optional<double>(u, "bandwidth_gbps", 256.0, ctx);
    unit.shared_mem_mib = Optional<double>(u, "shared_mem_mib", 8.0, ctx);
    unit.power_watts = Optional<double>(u, "power_watts", 1.0, ctx);
    hw.units.push_back(std::move(unit));
  }
  WithContext(context, [&] {
    ValidateHardware(hw);
    return 0;
  });
  return hw;
}

SyntheticCostParams SyntheticParamsFromJson(const Json& j,
                                            const std::string& context) {
  if (!j.is_object() || !j.contains("synthetic")) {
    return SyntheticCostParams::Defaults();
  }
  const Json& s = j.at("synthetic");
  const std::string ctx = context + ": synthetic";
  SyntheticCostParams p;
  p.default_efficiency = Optional<double>(s, "default_efficiency", 0.5, ctx);
  if (s.contains("efficiency")) {
    p.efficiency = Required<std::map<std::string, std::map<std::string, double>>>(
        s, "efficiency", ctx);
  }
  return p;
}

Json CostTableToJson(const CostTable& table) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["e_max_mj"] = table.e_max_mj();
  Json entries = Json::array();
  for (const auto& e : table.Entries()) {
    entries.push_back({{"model", e.model},
                       {"unit", e.unit},
                       {"latency_ms", e.latency_ms},
                       {"energy_mj", e.energy_mj}});
  }
  j["entries"] = std::move(entries);
  return j;
}

CostTable CostTableFromJson(const Json& j, const std::string& context) {
  CheckSchema(j, context);
  CostTable table(WithContext(
      context, [&] { return CostTable(Required<double>(j, "e_max_mj", context)); }));
  const Json& entries = RequiredArray(j, "entries", context);
  for (size_t i = 0; i < entries.size(); ++i) {
    const std::string ctx = fmt::format("{}: entries[{}]", context, i);
    CostEntry e;
    e.model = Required<std::string>(entries[i], "model", ctx);
    e.unit = Required<std::string>(entries[i], "unit", ctx);
    e.latency_ms = Required<double>(entries[i], "latency_ms", ctx);
    e.energy_mj = Required<double>(entries[i], "energy_mj", ctx);
    WithContext(ctx, [&] {
      table.Add(e);
      return 0;
    });
  }
  return table;
}

void WriteEventLogCsv(std::ostream& os, const EventLog& log) {
  fmt::print(os, "# schema_version={},scenario={},hardware={},seed={},duration_s={}\n",
             kSchemaVersion, log.scenario, log.hardware, log.seed,
             log.duration_s);
  os << "model,request_index,frame_index,unit,t_req,t_start,t_end,t_dl,status,"
        "energy_mj\n";
  for (const auto& e : log.entries) {
    const auto& r = e.request;
    if (e.completed()) {
      fmt::print(os, "{},{},{},{},{},{},{},{},{},{}\n", r.model,
                 r.request_index, r.frame_index, e.unit, FormatMs(r.t_req),
                 FormatMs(e.t_start), FormatMs(e.t_end), FormatMs(r.t_dl),
                 ToString(e.status), e.energy_mj);
    } else {
      fmt::print(os, "{},{},{},,{},,,{},{},0\n", r.model, r.request_index,
                 r.frame_index, FormatMs(r.t_req), FormatMs(r.t_dl),
                 ToString(e.status));
    }
  }
}

EventLog ReadEventLogCsv(std::istream& is, const UsageScenario& scenario,
                         const std::string& context) {
  EventLog log;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
    throw ConfigError(fmt::format("{}: missing '# schema_version=' header", context));
  }
  for (const auto& kv : SplitCsv(line.substr(2))) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      if (key == "schema_version" && std::stoi(value) != kSchemaVersion) {
        throw ConfigError(fmt::format("{}: schema_version {} is not supported",
                                      context, value));
      }
      if (key == "scenario") log.scenario = value;
      if (key == "hardware") log.hardware = value;
      if (key == "seed") log.seed = std::stoull(value);
      if (key == "duration_s") log.duration_s = std::stod(value);
    } catch (const std::logic_error&) {
      throw ConfigError(fmt::format("{}: header field '{}': bad value '{}'",
                                    context, key, value));
    }
  }
  if (log.scenario != scenario.id) {
    throw ConfigError(fmt::format("{}: log is for scenario '{}', not '{}'",
                                  context, log.scenario, scenario.id));
  }
  std::getline(is, line);  // column header
  int row = 2;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    auto f = SplitCsv(line);
    const std::string ctx = fmt::format("{}: line {}", context, row);
    if (f.size() != 10) {
      throw ConfigError(fmt::format("{}: expected 10 fields, got {}", ctx, f.size()));
    }
    TimelineEntry e;
    try {
      e.request.model = f[0];
      e.request.request_index = std::stoll(f[1]);
      e.request.frame_index = std::stoll(f[2]);
      e.unit = f[3];
      e.request.t_req = FromMillis(std::stod(f[4]));
      e.request.t_dl = FromMillis(std::stod(f[7]));
      e.status = WithContext(ctx, [&] { return EntryStatusFromString(f[8]); });
      if (e.completed()) {
        e.t_start = FromMillis(std::stod(f[5]));
        e.t_end = FromMillis(std::stod(f[6]));
        e.energy_mj = std::stod(f[9]);
      }
    } catch (const std::logic_error& err) {
      throw ConfigError(fmt::format("{}: {}", ctx, err.what()));
    }
    log.entries.push_back(std::move(e));
  }
  log.counts = CountEntries(log.entries, scenario);
  return log;
}

Json EventLogToJson(const EventLog& log) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = log.scenario;
  j["hardware"] = log.hardware;
  j["seed"] = log.seed;
  j["duration_s"] = log.duration_s;
  Json counts = Json::object();
  for (const auto& c : log.counts) {
    counts[c.model] = {{"n_total", c.n_total},
                       {"n_processed", c.n_processed},
                       {"n_dropped", c.n_dropped},
                       {"n_untriggered", c.n_untriggered},
                       {"n_sat", c.n_sat},
                       {"n_triggered", c.n_triggered}};
  }
  j["counts"] = std::move(counts);
  Json entries = Json::array();
  for (const auto& e : log.entries) {
    Json ej = {{"model", e.request.model},
               {"request_index", e.request.request_index},
               {"frame_index", e.request.frame_index},
               {"t_req_ms", ToMillis(e.request.t_req)},
               {"t_dl_ms", ToMillis(e.request.t_dl)},
               {"status", ToString(e.status)}};
    if (e.completed()) {
      ej["unit"] = e.unit;
      ej["t_start_ms"] = ToMillis(e.t_start);
      ej["t_end_ms"] = ToMillis(e.t_end);
      ej["energy_mj"] = e.energy_mj;
    }
    entries.push_back(std::move(ej));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json ScoringConfigToJson(const ScoringConfig& cfg) {
  return {{"k", cfg.k},
          {"e_max_mj", cfg.e_max_mj},
          {"overall_mean", ToString(cfg.overall_mean)},
          {"report_scale", ToString(cfg.report_scale)},
          {"count_untriggered_in_total", cfg.count_untriggered_in_total}};
}

Json ScoreReportToJson(const ScoreReport& report, const Json& config) {
  const double scale =
      report.config.report_scale == ReportScale::kPercent ? 100.0 : 1.0;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config;
  j["scoring"] = ScoringConfigToJson(report.config);
  Json scenarios = Json::object();
  for (const auto& s : report.scenarios) {
    Json models = Json::object();
    for (const auto& m : s.models) {
      models[m.model] = {{"rt_mean", scale * m.rt_mean},
                         {"en_mean", scale * m.en_mean},
                         {"acc_mean", scale * m.acc_mean},
                         {"model_score", scale * m.model_score},
                         {"qoe", scale * m.qoe},
                         {"n_total", m.n_total},
                         {"n_processed", m.n_processed},
                         {"n_dropped", m.n_dropped},
                         {"n_untriggered", m.n_untriggered},
                         {"n_sat", m.n_sat},
                         {"scored", m.scored}};
    }
    scenarios[s.scenario] = {{"models", std::move(models)},
                             {"scenario_score", scale * s.score}};
  }
  j["scenarios"] = std::move(scenarios);
  j["overall"] = {{"arithmetic", scale * report.overall_arithmetic},
                  {"geometric", scale * report.overall_geometric},
                  {"selected", ToString(report.config.overall_mean)}};
  return j;
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("{}: cannot open file", path.string()));
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError(fmt::format("{}: cannot write file", tmp.string()));
    }
    out << contents;
    if (!out.flush()) {
      throw ConfigError(fmt::format("{}: write failed", tmp.string()));
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mmmt
