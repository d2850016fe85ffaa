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

// File: tsforge/simulator.hpp - Runs workloads under explicit schedules or
// scheduling policies and returns their traces.

#ifndef TSFORGE_SIMULATOR_HPP_
#define TSFORGE_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "tsforge/trace.hpp"
#include "tsforge/workload.hpp"

namespace tsforge {

enum class Policy : std::uint8_t {
  RoundRobin,
  Random,
  // Lets writers run while somebody is scanning, to stretch scans.
  AdversarialLongestScan,
  // Each call runs solo to completion: p1.1, p2.1, ..., pn.1, p1.2, ...
  Sequential,
};

std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view text);

enum class ScheduleMode : std::uint8_t {
  Strict,   // entries naming a process with nothing left to do are errors
  Lenient,  // such entries are skipped
};

// Schedule entry that strict mode rejects.
class ScheduleError : public std::invalid_argument {
 public:
  ScheduleError(std::size_t position, std::uint32_t pid);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A policy run took more steps than its budget; carries the partial trace.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t budget, Trace partial);
  const Trace& partial() const noexcept { return partial_; }

 private:
  Trace partial_;
};

// One step per schedule entry. A process's next call starts at its first
// scheduled step after the previous call returned. A register overflow ends
// the run and is recorded in trace.stats.overflow_reg.
Trace run_schedule(const Workload& workload, std::span<const std::uint32_t> schedule,
                   ScheduleMode mode = ScheduleMode::Strict);

// 10 * M * m * W where W bounds the total number of writes: M * (m - 1) for
// the phase algorithm, M for the simple one.
std::uint64_t default_step_budget(const Workload& workload);

// Schedules enabled processes until every call returned. Throws
// BudgetExceeded past `step_budget` steps (default_step_budget when empty).
Trace run_to_completion(const Workload& workload, Policy policy, std::uint64_t seed,
                        std::optional<std::uint64_t> step_budget = std::nullopt);

// Seed of run `index` in a campaign started from `base` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace tsforge

#endif  // TSFORGE_SIMULATOR_HPP_
