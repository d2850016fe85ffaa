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

// File: tsforge/trace_json.hpp - Trace serialization (schema "1").
//
//   {schema, algo, n, M, m, calls_per_process, steps[], calls[], scans[], stats{}}
//   step  {i, pid, call, op: "read"|"write", reg, val, line}
//   call  {id, invoke, response|null, ts|null, myrnd|null}
//   scan  {call, collects: [[first, last], ...], complete, lin|null}
//
// Values, ids and timestamps use the canonical text forms of types.hpp.

#ifndef TSFORGE_TRACE_JSON_HPP_
#define TSFORGE_TRACE_JSON_HPP_

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "tsforge/trace.hpp"

namespace tsforge {

inline constexpr const char* kSchemaVersion = "1";

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json trace_to_json(const Trace& trace);

// Throws TraceFormatError on missing keys, wrong types or bad canonical text.
// Access statistics are recomputed from the steps.
Trace trace_from_json(const nlohmann::ordered_json& doc);

Trace load_trace_file(const std::string& path);

}  // namespace tsforge

#endif  // TSFORGE_TRACE_JSON_HPP_
