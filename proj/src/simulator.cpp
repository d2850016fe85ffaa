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

#include "tsforge/simulator.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "tsforge/configuration.hpp"

namespace tsforge {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::RoundRobin: return "round-robin";
    case Policy::Random: return "random";
    case Policy::AdversarialLongestScan: return "adversarial-longest-scan";
    case Policy::Sequential: return "sequential";
  }
  return "?";
}

Policy parse_policy(std::string_view text) {
  if (text == "round-robin") return Policy::RoundRobin;
  if (text == "random") return Policy::Random;
  if (text == "adversarial-longest-scan") return Policy::AdversarialLongestScan;
  if (text == "sequential") return Policy::Sequential;
  throw std::invalid_argument("unknown policy '" + std::string(text) + "'");
}

ScheduleError::ScheduleError(std::size_t position, std::uint32_t pid)
    : std::invalid_argument("schedule entry " + std::to_string(position) + ": process " +
                            std::to_string(pid) + " has no step to take"),
      position_(position) {}

BudgetExceeded::BudgetExceeded(std::uint64_t budget, Trace partial)
    : std::runtime_error("step budget of " + std::to_string(budget) + " exhausted"),
      partial_(std::move(partial)) {}

std::uint64_t default_step_budget(const Workload& workload) {
  const std::uint64_t big_m = workload.total_calls();
  const std::uint64_t m = workload.registers();
  const std::uint64_t writes = workload.algo == Algorithm::Simple ? big_m : big_m * (m - 1);
  return 10 * big_m * m * writes;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

template <class Algo>
Trace run_schedule_impl(const Workload& workload, std::span<const std::uint32_t> schedule,
                        ScheduleMode mode) {
  Configuration<Algo> config(workload);
  TraceRecorder<Algo> recorder(workload);
  for (std::size_t pos = 0; pos < schedule.size(); ++pos) {
    const std::uint32_t pid = schedule[pos];
    if (!config.enabled(pid)) {
      if (mode == ScheduleMode::Strict) throw ScheduleError(pos, pid);
      continue;
    }
    try {
      recorder.record(config.step(pid));
    } catch (const RegisterOverflow& e) {
      recorder.mark_overflow(e.reg());
      break;
    }
  }
  return recorder.take();
}

// Picks the next process under a policy; the active list holds every process
// that still has a step to take.
class Chooser {
 public:
  Chooser(Policy policy, std::uint64_t seed, std::uint32_t n) : policy_(policy), rng_(seed) {
    for (std::uint32_t pid = 1; pid <= n; ++pid) active_.push_back(pid);
  }

  bool empty() const noexcept { return active_.empty(); }

  template <class Config>
  std::uint32_t pick(const Config& config) {
    switch (policy_) {
      case Policy::RoundRobin: {
        auto it = std::upper_bound(active_.begin(), active_.end(), last_);
        last_ = it == active_.end() ? active_.front() : *it;
        return last_;
      }
      case Policy::Sequential: {
        // Stay on the current process until its call returns.
        if (last_ != 0 && config.in_call(last_)) return last_;
        auto it = std::upper_bound(active_.begin(), active_.end(), last_);
        last_ = it == active_.end() ? active_.front() : *it;
        return last_;
      }
      case Policy::Random:
        return uniform(active_);
      case Policy::AdversarialLongestScan: {
        bool scanning = false;
        candidates_.clear();
        for (std::uint32_t pid : active_) {
          const auto* mach = config.machine(pid);
          if (config.in_call(pid) && mach != nullptr && is_scanning(*mach)) {
            scanning = true;
          } else {
            candidates_.push_back(pid);
          }
        }
        if (scanning && !candidates_.empty()) return uniform(candidates_);
        return uniform(active_);
      }
    }
    return active_.front();
  }

  void retire(std::uint32_t pid) {
    auto it = std::lower_bound(active_.begin(), active_.end(), pid);
    if (it != active_.end() && *it == pid) active_.erase(it);
  }

 private:
  static bool is_scanning(const PhaseMachine& mach) { return mach.pc() == PhaseMachine::Pc::Scan; }
  static bool is_scanning(const SimpleMachine&) { return false; }

  std::uint32_t uniform(const std::vector<std::uint32_t>& from) {
    std::uniform_int_distribution<std::size_t> dist(0, from.size() - 1);
    return from[dist(rng_)];
  }

  Policy policy_;
  std::mt19937_64 rng_;
  std::vector<std::uint32_t> active_;  // sorted
  std::vector<std::uint32_t> candidates_;
  std::uint32_t last_ = 0;
};

template <class Algo>
Trace run_policy_impl(const Workload& workload, Policy policy, std::uint64_t seed,
                      std::uint64_t budget) {
  Configuration<Algo> config(workload);
  TraceRecorder<Algo> recorder(workload);
  Chooser chooser(policy, seed, workload.n);
  std::uint64_t steps = 0;
  while (!chooser.empty()) {
    if (steps == budget) {
      recorder.mark_budget_exhausted();
      throw BudgetExceeded(budget, recorder.take());
    }
    const std::uint32_t pid = chooser.pick(config);
    try {
      recorder.record(config.step(pid));
    } catch (const RegisterOverflow& e) {
      recorder.mark_overflow(e.reg());
      break;
    }
    ++steps;
    if (!config.enabled(pid)) chooser.retire(pid);
  }
  return recorder.take();
}

}  // namespace

Trace run_schedule(const Workload& workload, std::span<const std::uint32_t> schedule,
                   ScheduleMode mode) {
  workload.validate();
  if (workload.algo == Algorithm::Simple) {
    return run_schedule_impl<SimpleAlgo>(workload, schedule, mode);
  }
  return run_schedule_impl<PhaseAlgo>(workload, schedule, mode);
}

Trace run_to_completion(const Workload& workload, Policy policy, std::uint64_t seed,
                        std::optional<std::uint64_t> step_budget) {
  workload.validate();
  const std::uint64_t budget = step_budget.value_or(default_step_budget(workload));
  if (workload.algo == Algorithm::Simple) {
    return run_policy_impl<SimpleAlgo>(workload, policy, seed, budget);
  }
  return run_policy_impl<PhaseAlgo>(workload, policy, seed, budget);
}

}  // namespace tsforge
