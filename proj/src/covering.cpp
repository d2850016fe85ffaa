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

#include "tsforge/covering.hpp"

#include <deque>
#include <numeric>
#include <unordered_set>

#include "tsforge/trace_json.hpp"

namespace tsforge {

bool is_3k_signature(const Signature& sig, std::uint64_t k) {
  std::uint64_t sum = 0;
  for (std::uint32_t c : sig) {
    if (c > 3) return false;
    sum += c;
  }
  return sum == k;
}

bool is_l_constrained_signature(const Signature& ordered, std::uint32_t l) {
  if (l < 1 || l > ordered.size()) {
    throw std::invalid_argument("l must lie in 1..m");
  }
  for (std::uint32_t c = 1; c <= l; ++c) {
    if (ordered[c - 1] + c > l) return false;
  }
  return true;
}

bool is_full_signature(const Signature& sig, std::uint32_t j, std::uint32_t k) {
  if (j < 1 || j > sig.size()) throw std::invalid_argument("j must lie in 1..m");
  const auto covered = std::count_if(sig.begin(), sig.end(), [k](std::uint32_t c) { return c >= k; });
  return static_cast<std::uint32_t>(covered) >= j;
}

namespace {

template <class Algo>
void search(const Workload& workload, const CoveringOptions& options, CoveringReport& report) {
  using Config = Configuration<Algo>;
  struct Parent {
    std::uint64_t parent;
    std::uint32_t pid;
  };
  std::vector<Parent> parents;
  std::unordered_set<std::string> seen;
  std::deque<std::pair<Config, std::uint64_t>> frontier;

  std::optional<std::uint64_t> best_node;
  auto score = [&](const Config& config, std::uint64_t id) {
    if (options.quiescent_only && !is_quiescent(config)) return;
    const Signature sig = signature(config);
    const std::uint64_t k = std::accumulate(sig.begin(), sig.end(), std::uint64_t{0});
    if (!is_3k_signature(sig, k)) return;
    if (!best_node || k > report.max_k) {
      report.max_k = k;
      report.signature = sig;
      report.covered_registers =
          static_cast<std::uint32_t>(std::count_if(sig.begin(), sig.end(), [](std::uint32_t c) { return c > 0; }));
      best_node = id;
    }
  };

  Config root(workload);
  std::string key;
  root.append_key(key);
  seen.insert(std::move(key));
  parents.push_back(Parent{0, 0});
  report.nodes_visited = 1;
  score(root, 0);
  frontier.emplace_back(std::move(root), 0);

  while (!frontier.empty() && !report.budget_exhausted) {
    auto [config, id] = std::move(frontier.front());
    frontier.pop_front();
    for (std::uint32_t pid : config.enabled_pids()) {
      Config child = config;
      try {
        child.step(pid);
      } catch (const RegisterOverflow&) {
        continue;
      }
      key.clear();
      child.append_key(key);
      if (seen.contains(key)) continue;
      if (report.nodes_visited >= options.budget) {
        report.budget_exhausted = true;
        break;
      }
      seen.insert(key);
      ++report.nodes_visited;
      const std::uint64_t child_id = parents.size();
      parents.push_back(Parent{id, pid});
      score(child, child_id);
      frontier.emplace_back(std::move(child), child_id);
    }
  }

  for (std::uint64_t id = best_node.value_or(0); id != 0; id = parents[id].parent) {
    report.witness_schedule.push_back(parents[id].pid);
  }
  std::reverse(report.witness_schedule.begin(), report.witness_schedule.end());
}

}  // namespace

CoveringReport search_max_covering(const Workload& workload, const CoveringOptions& options) {
  workload.validate();
  CoveringReport report;
  report.workload = workload;
  report.signature.assign(workload.registers(), 0);
  if (workload.algo == Algorithm::Simple) {
    search<SimpleAlgo>(workload, options, report);
  } else {
    search<PhaseAlgo>(workload, options, report);
  }
  return report;
}

nlohmann::ordered_json covering_to_json(const CoveringReport& report) {
  nlohmann::ordered_json out;
  out["schema"] = kSchemaVersion;
  out["algo"] = std::string(to_string(report.workload.algo));
  out["n"] = report.workload.n;
  out["M"] = report.workload.total_calls();
  out["m"] = report.workload.registers();
  out["max_k"] = report.max_k;
  out["witness_schedule"] = report.witness_schedule;
  out["signature"] = report.signature;
  out["ordered_signature"] = ordered_signature(report.signature);
  out["covered_registers"] = report.covered_registers;
  out["nodes_visited"] = report.nodes_visited;
  out["budget_exhausted"] = report.budget_exhausted;
  return out;
}

}  // namespace tsforge
