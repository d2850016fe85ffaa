// Copyright 2026 The tsforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tsforge/trace.hpp"

#include <fstream>

#include "tsforge/trace_json.hpp"

namespace tsforge {

std::string to_string(const Cell& cell) {
  return std::visit([](const auto& v) { return to_string(v); }, cell);
}

std::string to_string(const AnyTimestamp& ts) {
  return std::visit([](const auto& v) { return to_string(v); }, ts);
}

std::optional<std::size_t> Trace::find_call(GetTsId id) const {
  for (std::size_t i = 0; i < calls.size(); ++i) {
    if (calls[i].id == id) return i;
  }
  return std::nullopt;
}

std::uint32_t Trace::completed_calls() const {
  std::uint32_t done = 0;
  for (const CallRecord& c : calls) done += c.response.has_value() ? 1 : 0;
  return done;
}

std::vector<std::uint32_t> Trace::schedule() const {
  std::vector<std::uint32_t> out;
  out.reserve(steps.size());
  for (const TraceStep& s : steps) out.push_back(s.pid);
  return out;
}

Trace make_empty_trace(const Workload& workload) {
  Trace trace;
  trace.algo = workload.algo;
  trace.n = workload.n;
  trace.calls_per_process = workload.calls_per_process;
  trace.total_calls = workload.total_calls();
  trace.m = workload.registers();
  return trace;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::ordered_json;

template <class T>
T get_field(const ordered_json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw TraceFormatError(std::string("missing key '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw TraceFormatError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> get_optional(const ordered_json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get_field<T>(obj, key);
}

ordered_json nullable(const std::optional<std::uint64_t>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json trace_to_json(const Trace& trace) {
  ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["algo"] = std::string(to_string(trace.algo));
  doc["n"] = trace.n;
  doc["M"] = trace.total_calls;
  doc["m"] = trace.m;
  doc["calls_per_process"] = trace.calls_per_process;

  ordered_json steps = ordered_json::array();
  for (const TraceStep& s : trace.steps) {
    steps.push_back({{"i", s.index},
                     {"pid", s.pid},
                     {"call", to_string(s.call)},
                     {"op", s.op == AccessKind::Read ? "read" : "write"},
                     {"reg", s.reg},
                     {"val", to_string(s.value)},
                     {"line", s.line}});
  }
  doc["steps"] = std::move(steps);

  ordered_json calls = ordered_json::array();
  for (const CallRecord& c : trace.calls) {
    ordered_json rec;
    rec["id"] = to_string(c.id);
    rec["invoke"] = c.invoke;
    rec["response"] = nullable(c.response);
    rec["ts"] = c.timestamp ? ordered_json(to_string(*c.timestamp)) : ordered_json(nullptr);
    rec["myrnd"] = c.myrnd ? ordered_json(*c.myrnd) : ordered_json(nullptr);
    calls.push_back(std::move(rec));
  }
  doc["calls"] = std::move(calls);

  ordered_json scans = ordered_json::array();
  for (const ScanRecord& sc : trace.scans) {
    ordered_json windows = ordered_json::array();
    for (const CollectWindow& w : sc.collects) windows.push_back({w.first, w.last});
    scans.push_back({{"call", to_string(sc.call)},
                     {"collects", std::move(windows)},
                     {"complete", sc.complete},
                     {"lin", nullable(sc.linearization)}});
  }
  doc["scans"] = std::move(scans);

  doc["stats"] = {{"steps", trace.steps.size()},
                  {"reads", trace.stats.reads},
                  {"writes", trace.stats.writes},
                  {"completed_calls", trace.completed_calls()},
                  {"max_reg_accessed", trace.stats.max_reg_accessed},
                  {"max_reg_written", trace.stats.max_reg_written},
                  {"overflow_reg", trace.stats.overflow_reg ? ordered_json(*trace.stats.overflow_reg)
                                                            : ordered_json(nullptr)},
                  {"budget_exhausted", trace.stats.budget_exhausted}};
  return doc;
}

Trace trace_from_json(const nlohmann::ordered_json& doc) {
  Trace trace;
  try {
    trace.algo = parse_algorithm(get_field<std::string>(doc, "algo"));
    trace.n = get_field<std::uint32_t>(doc, "n");
    trace.total_calls = get_field<std::uint32_t>(doc, "M");
    trace.m = get_field<std::uint32_t>(doc, "m");
    trace.calls_per_process = get_optional<std::uint32_t>(doc, "calls_per_process").value_or(1);

    const bool simple = trace.algo == Algorithm::Simple;
    for (const ordered_json& s : get_field<ordered_json>(doc, "steps")) {
      TraceStep step;
      step.index = get_field<std::uint64_t>(s, "i");
      step.pid = get_field<std::uint32_t>(s, "pid");
      step.call = parse_getts_id(get_field<std::string>(s, "call"));
      const std::string op = get_field<std::string>(s, "op");
      if (op != "read" && op != "write") throw TraceFormatError("op must be read or write");
      step.op = op == "read" ? AccessKind::Read : AccessKind::Write;
      step.reg = get_field<std::uint32_t>(s, "reg");
      const std::string val = get_field<std::string>(s, "val");
      step.value = simple ? Cell(parse_simple_register_value(val)) : Cell(parse_register_value(val));
      step.line = get_field<std::uint16_t>(s, "line");
      if (step.reg > trace.stats.max_reg_accessed) trace.stats.max_reg_accessed = step.reg;
      if (step.op == AccessKind::Write) {
        ++trace.stats.writes;
        if (step.reg > trace.stats.max_reg_written) trace.stats.max_reg_written = step.reg;
      } else {
        ++trace.stats.reads;
      }
      trace.steps.push_back(std::move(step));
    }

    for (const ordered_json& c : get_field<ordered_json>(doc, "calls")) {
      CallRecord rec;
      rec.id = parse_getts_id(get_field<std::string>(c, "id"));
      rec.invoke = get_field<std::uint64_t>(c, "invoke");
      rec.response = get_optional<std::uint64_t>(c, "response");
      if (auto ts = get_optional<std::string>(c, "ts")) {
        rec.timestamp = simple ? AnyTimestamp(parse_simple_timestamp(*ts))
                               : AnyTimestamp(parse_phase_timestamp(*ts));
      }
      rec.myrnd = get_optional<std::uint32_t>(c, "myrnd");
      trace.calls.push_back(rec);
    }

    if (doc.contains("scans")) {
      for (const ordered_json& sc : get_field<ordered_json>(doc, "scans")) {
        ScanRecord rec;
        rec.call = parse_getts_id(get_field<std::string>(sc, "call"));
        for (const ordered_json& w : get_field<ordered_json>(sc, "collects")) {
          if (!w.is_array() || w.size() != 2) throw TraceFormatError("collect window must be [first, last]");
          rec.collects.push_back(CollectWindow{w[0].get<std::uint64_t>(), w[1].get<std::uint64_t>()});
        }
        rec.complete = get_field<bool>(sc, "complete");
        rec.linearization = get_optional<std::uint64_t>(sc, "lin");
        trace.scans.push_back(std::move(rec));
      }
    }

    if (doc.contains("stats")) {
      const ordered_json& st = doc.at("stats");
      trace.stats.overflow_reg = get_optional<std::uint32_t>(st, "overflow_reg");
      trace.stats.budget_exhausted = get_optional<bool>(st, "budget_exhausted").value_or(false);
    }
  } catch (const ParseError& e) {
    throw TraceFormatError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw TraceFormatError(e.what());
  }
  return trace;
}

Trace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceFormatError("cannot open " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw TraceFormatError(path + ": " + e.what());
  }
  return trace_from_json(doc);
}

}  // namespace tsforge
