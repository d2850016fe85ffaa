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

// File: tsforge/monitor.hpp - Online counterpart of the post-hoc checkers,
// advanced one step at a time. Its state is the path-dependent part of a
// configuration's future obligations and is folded into dedup keys.
//
// Phase starts are retroactive: a scan linearizes right after its penultimate
// collect, which is only known once the final collect matches. Writes that
// follow the latest completed collect of a relevant in-progress scan stay in
// a pending event list until their phase is certain.

#ifndef TSFORGE_MONITOR_HPP_
#define TSFORGE_MONITOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsforge/configuration.hpp"
#include "tsforge/verify.hpp"

namespace tsforge {

// Largest M (and m) an online monitor tracks; bitsets are 64 wide.
inline constexpr std::uint32_t kMonitorMaxCalls = 64;

template <class Algo>
class Monitor {
 public:
  using Value = typename Algo::Value;
  using Timestamp = typename Algo::Timestamp;

  // Throws std::invalid_argument when M or m exceed kMonitorMaxCalls.
  explicit Monitor(const Workload& workload);

  // Accounts for one step. `old_value` is the accessed register's content
  // before the step and `after` the register array after it. Violations carry
  // `step` as their step index.
  std::vector<Violation> observe(const StepEvent<Algo>& event, const Value& old_value,
                                 std::span<const Value> after, std::uint64_t step);

  // A step of pid reached past the register array.
  std::vector<Violation> overflow(std::uint32_t reg, std::uint64_t step) const;

  void append_key(std::string& key) const;

  std::uint32_t current_phase() const noexcept { return phase_; }
  std::uint32_t total_invalidations() const noexcept { return invalidations_; }
  std::size_t pending_events() const noexcept { return events_.size(); }

  friend bool operator==(const Monitor&, const Monitor&) = default;

 private:
  enum class Status : std::uint8_t { Idle, Running, Returned };

  struct CallState {
    Status status = Status::Idle;
    std::uint64_t pred = 0;  // calls returned before this one was invoked
    std::optional<Timestamp> ts;
    std::uint32_t while_iters = 0;
    std::uint32_t for_iters = 0;
    std::uint32_t writes = 0;
    std::uint64_t written = 0;  // registers written by this call
    std::uint32_t myrnd = 0;
    bool scanning = false;
    std::int64_t scan_writes = 0;  // writes by others since the scan began
    std::uint32_t scan_collects = 0;
    bool anchored = false;  // has an Anchor event in the pending list

    friend bool operator==(const CallState&, const CallState&) = default;
  };

  // Pending event encoding: kind in the top two bits, payload below.
  enum EventKind : std::uint16_t { kWrite = 0, kAnchor = 1, kLin = 2 };
  static std::uint16_t encode(EventKind kind, std::uint32_t payload) {
    return static_cast<std::uint16_t>((kind << 14) | payload);
  }

  void add(std::vector<Violation>& out, const char* checker, std::string kind, std::uint64_t step,
           std::string detail) const;
  void fold(std::vector<Violation>& out, std::uint64_t step);
  void start_phase(std::vector<Violation>& out, std::uint32_t phase, std::uint64_t step);
  void note_write(std::vector<Violation>& out, std::uint32_t reg, std::uint64_t step);
  void observe_phase(std::vector<Violation>& out, const StepEvent<Algo>& event,
                     const Value& old_value, std::span<const Value> after, std::uint64_t step);
  void observe_simple(std::vector<Violation>& out, const StepEvent<Algo>& event,
                      const Value& old_value, std::uint64_t step);
  void observe_return(std::vector<Violation>& out, const StepEvent<Algo>& event,
                      std::span<const Value> after, std::uint64_t step);

  Workload workload_;
  std::uint32_t m_ = 0;
  std::uint32_t bound_ = 0;
  std::uint64_t returned_mask_ = 0;
  std::vector<CallState> calls_;
  std::vector<std::uint64_t> written_lasts_;  // per register, dense call ids of last(seq)

  // Settled phase accounting.
  std::uint32_t phase_ = 0;
  std::uint64_t phase_first_writes_ = 0;
  std::uint32_t invalidations_ = 0;
  std::vector<std::uint16_t> events_;
};

extern template class Monitor<SimpleAlgo>;
extern template class Monitor<PhaseAlgo>;

}  // namespace tsforge

#endif  // TSFORGE_MONITOR_HPP_
