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

// File: tsforge/trace.hpp - Totally ordered record of one execution: every
// register access, every call interval and every scan's collect windows.
// Traces are the sole input of the checkers in verify.hpp.

#ifndef TSFORGE_TRACE_HPP_
#define TSFORGE_TRACE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tsforge/configuration.hpp"
#include "tsforge/types.hpp"

namespace tsforge {

using Cell = std::variant<SimpleRegisterValue, RegisterValue>;
using AnyTimestamp = std::variant<SimpleTimestamp, PhaseTimestamp>;

std::string to_string(const Cell& cell);
std::string to_string(const AnyTimestamp& ts);

struct TraceStep {
  std::uint64_t index = 0;
  std::uint32_t pid = 0;
  GetTsId call;
  AccessKind op = AccessKind::Read;
  std::uint32_t reg = 0;
  Cell value;
  std::uint16_t line = 0;
};

struct CallRecord {
  GetTsId id;
  std::uint64_t invoke = 0;  // index of the call's first step
  std::optional<std::uint64_t> response;  // index of the returning step
  std::optional<AnyTimestamp> timestamp;
  std::optional<std::uint32_t> myrnd;  // phase algorithm only
};

// Step indices of the first and last read of one collect.
struct CollectWindow {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

struct ScanRecord {
  GetTsId call;
  std::vector<CollectWindow> collects;
  bool complete = false;
  // Step right after the final read of the penultimate collect.
  std::optional<std::uint64_t> linearization;
};

struct TraceStats {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint32_t max_reg_accessed = 0;
  std::uint32_t max_reg_written = 0;
  // A machine reached past the register array; the run stopped there.
  std::optional<std::uint32_t> overflow_reg;
  bool budget_exhausted = false;
};

struct Trace {
  Algorithm algo = Algorithm::Phase;
  std::uint32_t n = 0;
  std::uint32_t calls_per_process = 1;
  std::uint32_t total_calls = 0;  // M
  std::uint32_t m = 0;
  std::vector<TraceStep> steps;
  std::vector<CallRecord> calls;  // in invocation order
  std::vector<ScanRecord> scans;  // in order of first collect
  TraceStats stats;

  // Index into `calls` of the record for `id`, if that call was invoked.
  std::optional<std::size_t> find_call(GetTsId id) const;
  std::uint32_t completed_calls() const;
  // The schedule that produced the steps.
  std::vector<std::uint32_t> schedule() const;
};

Trace make_empty_trace(const Workload& workload);

// Appends StepEvents of one execution to a Trace.
template <class Algo>
class TraceRecorder {
 public:
  explicit TraceRecorder(const Workload& workload)
      : trace_(make_empty_trace(workload)),
        call_slot_(workload.total_calls(), kNone),
        open_scan_(workload.total_calls(), kNone),
        collect_open_(workload.total_calls(), false) {}

  void record(const StepEvent<Algo>& event) {
    const std::uint64_t index = trace_.steps.size();
    const auto& effect = event.result.effect;
    trace_.steps.push_back(TraceStep{index, event.pid, event.call, effect.kind, effect.reg,
                                     Cell(effect.value), effect.line});
    if (effect.reg > trace_.stats.max_reg_accessed) trace_.stats.max_reg_accessed = effect.reg;
    if (effect.kind == AccessKind::Write) {
      ++trace_.stats.writes;
      if (effect.reg > trace_.stats.max_reg_written) trace_.stats.max_reg_written = effect.reg;
    } else {
      ++trace_.stats.reads;
    }

    const std::uint32_t c = event.call_index;
    if (event.invoked) {
      call_slot_[c] = trace_.calls.size();
      trace_.calls.push_back(CallRecord{event.call, index, std::nullopt, std::nullopt, std::nullopt});
    }
    CallRecord& call = trace_.calls[call_slot_[c]];
    if (event.result.notes.myrnd) call.myrnd = event.result.notes.myrnd;

    if constexpr (Algo::kTag == Algorithm::Phase) {
      if (effect.kind == AccessKind::Read && effect.line == 13) note_scan_read(event, index);
    }

    if (event.result.returned) {
      call.response = index;
      call.timestamp = AnyTimestamp(*event.result.returned);
    }
  }

  void mark_overflow(std::uint32_t reg) { trace_.stats.overflow_reg = reg; }
  void mark_budget_exhausted() { trace_.stats.budget_exhausted = true; }

  const Trace& trace() const noexcept { return trace_; }
  Trace take() { return std::move(trace_); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void note_scan_read(const StepEvent<Algo>& event, std::uint64_t index) {
    const std::uint32_t c = event.call_index;
    if (open_scan_[c] == kNone) {
      open_scan_[c] = trace_.scans.size();
      trace_.scans.push_back(ScanRecord{event.call, {}, false, std::nullopt});
    }
    ScanRecord& scan = trace_.scans[open_scan_[c]];
    if (!collect_open_[c]) {
      scan.collects.push_back(CollectWindow{index, index});
      collect_open_[c] = true;
    }
    scan.collects.back().last = index;
    if (event.result.notes.collect_completed) collect_open_[c] = false;
    if (event.result.notes.scan_completed) {
      scan.complete = true;
      scan.linearization = scan.collects[scan.collects.size() - 2].last + 1;
      open_scan_[c] = kNone;
    }
  }

  Trace trace_;
  std::vector<std::size_t> call_slot_;
  std::vector<std::size_t> open_scan_;
  std::vector<bool> collect_open_;
};

}  // namespace tsforge

#endif  // TSFORGE_TRACE_HPP_
