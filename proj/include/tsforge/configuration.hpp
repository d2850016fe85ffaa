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

// File: tsforge/configuration.hpp - Register array plus per-process machine
// states; the unit advanced by schedules and explored by the searches.

#ifndef TSFORGE_CONFIGURATION_HPP_
#define TSFORGE_CONFIGURATION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsforge/detail/key_util.hpp"
#include "tsforge/machines.hpp"
#include "tsforge/workload.hpp"

namespace tsforge {

struct SimpleAlgo {
  using Machine = SimpleMachine;
  using Value = SimpleRegisterValue;
  using Timestamp = SimpleTimestamp;
  static constexpr Algorithm kTag = Algorithm::Simple;

  static Machine start(const Workload& w, std::uint32_t pid, std::uint32_t /*seq*/) {
    return SimpleMachine(pid, w.n);
  }
};

struct PhaseAlgo {
  using Machine = PhaseMachine;
  using Value = RegisterValue;
  using Timestamp = PhaseTimestamp;
  static constexpr Algorithm kTag = Algorithm::Phase;

  static Machine start(const Workload& w, std::uint32_t pid, std::uint32_t seq) {
    return PhaseMachine(pid, seq, w.registers());
  }
};

template <class Algo>
struct StepEvent {
  std::uint32_t pid = 0;
  GetTsId call;
  std::uint32_t call_index = 0;
  bool invoked = false;  // this step is the call's first step
  StepResult<typename Algo::Value, typename Algo::Timestamp> result;
};

template <class Algo>
class Configuration {
 public:
  using Machine = typename Algo::Machine;
  using Value = typename Algo::Value;
  using Timestamp = typename Algo::Timestamp;

  explicit Configuration(Workload workload)
      : workload_(workload), registers_(workload.registers()), slots_(workload.n) {
    workload_.validate();
    if (workload_.algo != Algo::kTag) {
      throw std::invalid_argument("workload algorithm does not match configuration type");
    }
  }

  const Workload& workload() const noexcept { return workload_; }
  std::uint32_t n() const noexcept { return workload_.n; }
  std::span<const Value> registers() const noexcept { return registers_; }

  // Current (or last) machine of process pid; nullptr before its first call.
  const Machine* machine(std::uint32_t pid) const {
    const auto& slot = slots_.at(pid - 1);
    return slot.machine ? &*slot.machine : nullptr;
  }

  std::uint32_t calls_started(std::uint32_t pid) const { return slots_.at(pid - 1).calls_started; }

  // A call of pid is in progress.
  bool in_call(std::uint32_t pid) const {
    const Machine* mach = machine(pid);
    return mach != nullptr && mach->enabled();
  }

  // pid can take another step, possibly by starting its next call.
  bool enabled(std::uint32_t pid) const {
    if (pid < 1 || pid > workload_.n) return false;
    return in_call(pid) || calls_started(pid) < workload_.calls_per_process;
  }

  std::vector<std::uint32_t> enabled_pids() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t pid = 1; pid <= workload_.n; ++pid) {
      if (enabled(pid)) out.push_back(pid);
    }
    return out;
  }

  bool all_returned() const {
    for (std::uint32_t pid = 1; pid <= workload_.n; ++pid) {
      if (enabled(pid)) return false;
    }
    return true;
  }

  // No call has started without finishing.
  bool quiescent() const {
    for (std::uint32_t pid = 1; pid <= workload_.n; ++pid) {
      if (in_call(pid)) return false;
    }
    return true;
  }

  // The access pid's next step would perform; empty when pid is disabled.
  std::optional<Access<Value>> next_access(std::uint32_t pid) const {
    if (in_call(pid)) return machine(pid)->next_access();
    if (!enabled(pid)) return std::nullopt;
    return Algo::start(workload_, pid, calls_started(pid) + 1).next_access();
  }

  // Advances pid by one step, starting its next call first when needed.
  // Throws RegisterOverflow when the machine reaches past the array; the
  // configuration is then unusable.
  StepEvent<Algo> step(std::uint32_t pid) {
    if (!enabled(pid)) {
      throw std::logic_error("process " + std::to_string(pid) + " has no step to take");
    }
    auto& slot = slots_[pid - 1];
    StepEvent<Algo> event;
    event.pid = pid;
    if (!slot.machine || !slot.machine->enabled()) {
      ++slot.calls_started;
      slot.machine.emplace(Algo::start(workload_, pid, slot.calls_started));
      event.invoked = true;
    }
    event.call = GetTsId{pid, slot.calls_started};
    event.call_index = workload_.call_index(event.call);
    event.result = slot.machine->step(registers_);
    const auto& effect = event.result.effect;
    if (effect.kind == AccessKind::Write) registers_[effect.reg - 1] = effect.value;
    return event;
  }

  void append_key(std::string& key) const {
    for (const Value& v : registers_) tsforge::append_key(key, v);
    for (const auto& slot : slots_) {
      detail::put_varint(key, slot.calls_started);
      if (slot.machine && slot.machine->enabled()) {
        slot.machine->append_key(key);
      } else {
        key.push_back('\0');
      }
    }
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  struct Slot {
    std::uint32_t calls_started = 0;
    std::optional<Machine> machine;

    friend bool operator==(const Slot&, const Slot&) = default;
  };

  Workload workload_;
  std::vector<Value> registers_;
  std::vector<Slot> slots_;
};

}  // namespace tsforge

#endif  // TSFORGE_CONFIGURATION_HPP_
