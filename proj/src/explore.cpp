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

#include "tsforge/explore.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_set>

#include "tsforge/configuration.hpp"
#include "tsforge/monitor.hpp"
#include "tsforge/simulator.hpp"
#include "tsforge/trace_json.hpp"

namespace tsforge {

std::string_view to_string(ExploreMode mode) {
  return mode == ExploreMode::FullPaths ? "full-paths" : "dedup-graph";
}

ExploreMode parse_explore_mode(std::string_view text) {
  if (text == "full-paths") return ExploreMode::FullPaths;
  if (text == "dedup-graph") return ExploreMode::DedupGraph;
  throw std::invalid_argument("unknown exploration mode '" + std::string(text) + "'");
}

namespace {

void report_violation(ExplorationReport& report, const ExploreOptions& options, Violation v,
                      const std::vector<std::uint32_t>& witness) {
  ++report.violation_count;
  if (report.violations.size() < options.max_reported) {
    v.witness_schedule = witness;
    report.violations.push_back(std::move(v));
  }
}

template <class Algo>
void full_paths(const Workload& workload, const ExploreOptions& options, ExplorationReport& report) {
  struct Frame {
    Configuration<Algo> config;
    std::vector<std::uint32_t> choices;
    std::size_t next = 0;
  };
  std::vector<std::uint32_t> schedule;
  std::vector<Frame> stack;

  auto check_leaf = [&]() {
    ++report.paths;
    if (schedule.size() > report.max_depth) report.max_depth = static_cast<std::uint32_t>(schedule.size());
    const Trace trace = run_schedule(workload, schedule);
    for (Verdict& verdict : run_all_checkers(trace)) {
      for (Violation& v : verdict.violations) report_violation(report, options, std::move(v), schedule);
    }
  };

  auto push = [&](Configuration<Algo> config) {
    ++report.nodes;
    std::vector<std::uint32_t> choices = config.enabled_pids();
    if (choices.empty()) {
      ++report.terminal;
      check_leaf();
      return;
    }
    stack.push_back(Frame{std::move(config), std::move(choices), 0});
  };

  push(Configuration<Algo>(workload));
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.choices.size()) {
      stack.pop_back();
      if (!schedule.empty()) schedule.pop_back();
      continue;
    }
    if (report.paths >= options.budget) {
      report.budget_exhausted = true;
      return;
    }
    const std::uint32_t pid = top.choices[top.next++];
    Configuration<Algo> child = top.config;
    schedule.push_back(pid);
    ++report.edges;
    bool overflowed = false;
    try {
      child.step(pid);
    } catch (const RegisterOverflow&) {
      overflowed = true;
    }
    if (overflowed) {
      ++report.nodes;
      check_leaf();
      schedule.pop_back();
      continue;
    }
    const std::size_t depth = stack.size();
    push(std::move(child));
    if (stack.size() == depth) schedule.pop_back();  // leaf
  }
}

template <class Algo>
void dedup_graph(const Workload& workload, const ExploreOptions& options, ExplorationReport& report) {
  using Config = Configuration<Algo>;
  using Mon = Monitor<Algo>;
  struct Node {
    Config config;
    Mon monitor;
    std::uint64_t id;
    std::uint32_t depth;
  };
  struct Parent {
    std::uint64_t parent;
    std::uint32_t pid;
  };

  std::vector<Parent> parents;
  std::unordered_set<std::string> seen;
  std::deque<Node> frontier;

  auto key_of = [](const Config& config, const Mon& monitor) {
    std::string key;
    config.append_key(key);
    key.push_back('|');
    monitor.append_key(key);
    return key;
  };
  auto witness = [&](std::uint64_t id, std::uint32_t last) {
    std::vector<std::uint32_t> out{last};
    while (id != 0) {
      out.push_back(parents[id].pid);
      id = parents[id].parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  };

  Config root(workload);
  Mon root_monitor(workload);
  seen.insert(key_of(root, root_monitor));
  parents.push_back(Parent{0, 0});
  frontier.push_back(Node{std::move(root), std::move(root_monitor), 0, 0});
  report.nodes = 1;

  while (!frontier.empty()) {
    Node node = std::move(frontier.front());
    frontier.pop_front();
    report.max_depth = std::max(report.max_depth, node.depth);
    const std::vector<std::uint32_t> pids = node.config.enabled_pids();
    if (pids.empty()) {
      ++report.terminal;
      continue;
    }
    for (std::uint32_t pid : pids) {
      Config child = node.config;
      Mon monitor = node.monitor;
      ++report.edges;
      const auto access = child.next_access(pid);
      typename Algo::Value old_value{};
      if (access && access->reg >= 1 && access->reg <= child.registers().size()) {
        old_value = child.registers()[access->reg - 1];
      }
      std::vector<Violation> found;
      bool alive = true;
      try {
        const auto event = child.step(pid);
        found = monitor.observe(event, old_value, child.registers(), node.depth);
      } catch (const RegisterOverflow& e) {
        found = monitor.overflow(e.reg(), node.depth);
        alive = false;
      }
      if (!found.empty()) {
        const auto schedule = witness(node.id, pid);
        for (Violation& v : found) report_violation(report, options, std::move(v), schedule);
      }
      if (!alive) continue;
      std::string key = key_of(child, monitor);
      if (seen.contains(key)) continue;
      if (report.nodes >= options.budget) {
        report.budget_exhausted = true;
        return;
      }
      seen.insert(std::move(key));
      ++report.nodes;
      const std::uint64_t id = parents.size();
      parents.push_back(Parent{node.id, pid});
      frontier.push_back(Node{std::move(child), std::move(monitor), id, node.depth + 1});
    }
  }
}

}  // namespace

ExplorationReport explore(const Workload& workload, const ExploreOptions& options) {
  workload.validate();
  ExplorationReport report;
  report.workload = workload;
  report.mode = options.mode;
  report.budget = options.budget;
  const bool simple = workload.algo == Algorithm::Simple;
  if (options.mode == ExploreMode::FullPaths) {
    if (simple) {
      full_paths<SimpleAlgo>(workload, options, report);
    } else {
      full_paths<PhaseAlgo>(workload, options, report);
    }
  } else if (simple) {
    dedup_graph<SimpleAlgo>(workload, options, report);
  } else {
    dedup_graph<PhaseAlgo>(workload, options, report);
  }
  return report;
}

nlohmann::ordered_json report_to_json(const ExplorationReport& report) {
  nlohmann::ordered_json out;
  out["schema"] = kSchemaVersion;
  out["algo"] = std::string(to_string(report.workload.algo));
  out["n"] = report.workload.n;
  out["M"] = report.workload.total_calls();
  out["m"] = report.workload.registers();
  out["calls_per_process"] = report.workload.calls_per_process;
  out["mode"] = std::string(to_string(report.mode));
  out["budget"] = report.budget;
  out["paths"] = report.paths;
  out["nodes"] = report.nodes;
  out["edges"] = report.edges;
  out["terminal"] = report.terminal;
  out["max_depth"] = report.max_depth;
  out["budget_exhausted"] = report.budget_exhausted;
  if (report.budget_exhausted) {
    out["note"] = "budget-exhausted: partial exploration; the pass covers only the visited part";
  }
  out["violation_count"] = report.violation_count;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const Violation& v : report.violations) list.push_back(violation_to_json(v));
  out["violations"] = std::move(list);
  out["pass"] = report.pass();
  return out;
}

}  // namespace tsforge
