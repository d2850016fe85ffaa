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

// File: tsforge/explore.hpp - Exhaustive exploration of the interleavings of
// a small workload.
//
//   full-paths   depth-first over every schedule; each maximal execution is
//                replayed into a trace and handed to run_all_checkers
//   dedup-graph  breadth-first over distinct (configuration, monitor) pairs;
//                every edge is checked by the online Monitor

#ifndef TSFORGE_EXPLORE_HPP_
#define TSFORGE_EXPLORE_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tsforge/verify.hpp"
#include "tsforge/workload.hpp"

namespace tsforge {

enum class ExploreMode : std::uint8_t { FullPaths, DedupGraph };

std::string_view to_string(ExploreMode mode);
ExploreMode parse_explore_mode(std::string_view text);

inline constexpr std::uint64_t kDefaultExploreBudget = 10'000'000;

struct ExploreOptions {
  ExploreMode mode = ExploreMode::DedupGraph;
  std::uint64_t budget = kDefaultExploreBudget;  // paths (full-paths) or nodes (dedup-graph)
  std::size_t max_reported = 100;  // violations kept with witnesses
};

struct ExplorationReport {
  Workload workload;
  ExploreMode mode = ExploreMode::DedupGraph;
  std::uint64_t budget = 0;
  std::uint64_t paths = 0;     // maximal executions checked (full-paths)
  std::uint64_t nodes = 0;     // configurations visited
  std::uint64_t edges = 0;     // steps taken
  std::uint64_t terminal = 0;  // visited configurations where every call returned
  std::uint32_t max_depth = 0;
  bool budget_exhausted = false;
  std::uint64_t violation_count = 0;
  std::vector<Violation> violations;  // first max_reported, each with a witness schedule

  bool pass() const noexcept { return violation_count == 0; }
};

// Dedup-graph mode needs M <= 64 (kMonitorMaxCalls).
ExplorationReport explore(const Workload& workload, const ExploreOptions& options = {});

nlohmann::ordered_json report_to_json(const ExplorationReport& report);

}  // namespace tsforge

#endif  // TSFORGE_EXPLORE_HPP_
