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

#include "tsforge/monitor.hpp"

#include <algorithm>
#include <bit>

#include "tsforge/detail/key_util.hpp"

namespace tsforge {

namespace {

std::string reg_name(std::uint32_t reg) { return "R[" + std::to_string(reg) + "]"; }

std::uint64_t bit(std::uint32_t i) { return std::uint64_t{1} << i; }

bool strictly_before(const PhaseTimestamp& a, const PhaseTimestamp& b) {
  return compare(a, b) && !compare(b, a);
}
bool strictly_before(const SimpleTimestamp& a, const SimpleTimestamp& b) {
  return simple_compare(a, b) && !simple_compare(b, a);
}

void put_timestamp(std::string& key, const PhaseTimestamp& ts) {
  detail::put_varint(key, ts.rnd);
  detail::put_varint(key, ts.turn);
}
void put_timestamp(std::string& key, const SimpleTimestamp& ts) { detail::put_varint(key, ts.value); }

}  // namespace

template <class Algo>
Monitor<Algo>::Monitor(const Workload& workload)
    : workload_(workload),
      m_(workload.registers()),
      bound_(phase_register_bound(workload.total_calls())),
      calls_(workload.total_calls()),
      written_lasts_(workload.registers(), 0) {
  if (workload.total_calls() > kMonitorMaxCalls || m_ > kMonitorMaxCalls) {
    throw std::invalid_argument("online monitor supports at most " +
                                std::to_string(kMonitorMaxCalls) + " calls and registers");
  }
}

template <class Algo>
void Monitor<Algo>::add(std::vector<Violation>& out, const char* checker, std::string kind,
                        std::uint64_t step, std::string detail) const {
  out.push_back(Violation{checker, std::move(kind), step, std::move(detail), std::nullopt});
}

template <class Algo>
std::vector<Violation> Monitor<Algo>::overflow(std::uint32_t reg, std::uint64_t step) const {
  std::vector<Violation> out;
  add(out, Algo::kTag == Algorithm::Phase ? kSpace : kSimpleAlgorithm, "register-overflow", step,
      "access to " + reg_name(reg) + " beyond the array of " + std::to_string(m_));
  return out;
}

template <class Algo>
std::vector<Violation> Monitor<Algo>::observe(const StepEvent<Algo>& event, const Value& old_value,
                                              std::span<const Value> after, std::uint64_t step) {
  std::vector<Violation> out;
  CallState& call = calls_[event.call_index];
  if (event.invoked) {
    call = CallState{};
    call.status = Status::Running;
    call.pred = returned_mask_;
  }
  if constexpr (Algo::kTag == Algorithm::Phase) {
    observe_phase(out, event, old_value, after, step);
  } else {
    observe_simple(out, event, old_value, step);
  }
  if (event.result.returned) observe_return(out, event, after, step);
  return out;
}

template <class Algo>
void Monitor<Algo>::observe_simple(std::vector<Violation>& out, const StepEvent<Algo>& event,
                                   const Value& old_value, std::uint64_t step) {
  if constexpr (Algo::kTag == Algorithm::Simple) {
    const auto& effect = event.result.effect;
    if (effect.kind != AccessKind::Write) return;
    CallState& call = calls_[event.call_index];
    if (effect.value.value > 2) {
      add(out, kSimpleAlgorithm, "value-range", step,
          reg_name(effect.reg) + " := " + std::to_string(effect.value.value));
    }
    if (effect.value.value < old_value.value) {
      add(out, kSimpleAlgorithm, "monotonicity", step,
          reg_name(effect.reg) + " decreased from " + std::to_string(old_value.value) + " to " +
              std::to_string(effect.value.value));
    }
    if (effect.reg != (event.pid + 1) / 2) {
      add(out, kSimpleAlgorithm, "foreign-register", step,
          "p" + std::to_string(event.pid) + " wrote " + reg_name(effect.reg));
    }
    if (++call.writes == 2) {
      add(out, kSimpleAlgorithm, "repeated-write", step, "p" + std::to_string(event.pid) + " wrote twice");
    }
  }
}

template <class Algo>
void Monitor<Algo>::observe_phase(std::vector<Violation>& out, const StepEvent<Algo>& event,
                                  const Value& old_value, std::span<const Value> after,
                                  std::uint64_t step) {
  if constexpr (Algo::kTag == Algorithm::Phase) {
    const auto& effect = event.result.effect;
    const auto& notes = event.result.notes;
    const std::uint32_t c = event.call_index;
    CallState& call = calls_[c];
    const std::string who = to_string(event.call);
    if (notes.myrnd) call.myrnd = *notes.myrnd;
  
    if (effect.reg > bound_) {
      add(out, kSpace, "accessed-beyond-bound", step,
          reg_name(effect.reg) + " accessed; bound is " + std::to_string(bound_));
    }
  
    if (effect.kind == AccessKind::Read) {
      if (effect.line == 1 && !effect.value.is_bottom() && ++call.while_iters == m_) {
        add(out, kWaitFreedom, "while-iterations", step, who + " iterated the while-loop m times");
      } else if (effect.line == 6 && ++call.for_iters == m_ - 1) {
        add(out, kWaitFreedom, "for-iterations", step, who + " iterated the for-loop m-1 times");
      } else if (effect.line == 13) {
        if (!call.scanning) {
          call.scanning = true;
          call.scan_writes = 0;
          call.scan_collects = 0;
        }
        if (notes.collect_completed) {
          ++call.scan_collects;
          const std::int64_t slack = notes.scan_completed ? 2 : 1;
          if (static_cast<std::int64_t>(call.scan_collects) > call.scan_writes + slack) {
            add(out, kWaitFreedom, "scan-collects", step,
                "scan of " + who + " took " + std::to_string(call.scan_collects) + " collects with " +
                    std::to_string(call.scan_writes) + " interfering writes");
          }
          auto anchor = std::find(events_.begin(), events_.end(), encode(kAnchor, c));
          if (notes.scan_completed) {
            call.scanning = false;
            if (call.anchored && anchor != events_.end()) {
              *anchor = encode(kLin, call.myrnd);
            }
            call.anchored = false;
            fold(out, step);
          } else {
            if (call.anchored && anchor != events_.end()) events_.erase(anchor);
            call.anchored = false;
            if (call.myrnd + 1 > phase_) {
              events_.push_back(encode(kAnchor, c));
              call.anchored = true;
            }
            fold(out, step);
          }
        }
      }
      return;
    }
  
    // Write.
    if (effect.reg + 1 > bound_) {
      add(out, kSpace, "written-beyond-bound", step,
          reg_name(effect.reg) + " written; bound is " + std::to_string(bound_ - 1));
    }
    if (++call.writes == m_) add(out, kWaitFreedom, "writes-per-call", step, who + " wrote m times");
    if (effect.reg >= 1 && effect.reg <= 64) {
      if (call.written & bit(effect.reg - 1)) {
        add(out, kWaitFreedom, "repeated-register-write", step, who + " wrote " + reg_name(effect.reg) + " twice");
      }
      call.written |= bit(effect.reg - 1);
    }
  
    if (effect.value.is_bottom()) {
      if (!old_value.is_bottom()) {
        add(out, kRegisterClaims, "claim-a", step, reg_name(effect.reg) + " returned to bottom");
      }
    } else {
      const GetTsId last = effect.value.last();
      const bool in_range = last.process >= 1 && last.process <= workload_.n && last.seq >= 1 &&
                            last.seq <= workload_.calls_per_process;
      if (in_range) {
        const std::uint64_t b = bit(workload_.call_index(last));
        std::uint64_t& lasts = written_lasts_[effect.reg - 1];
        if (lasts & b) {
          add(out, kRegisterClaims, "claim-b", step,
              reg_name(effect.reg) + " written twice with last(seq) = " + to_string(last));
        }
        lasts |= b;
      }
    }
    std::uint32_t prefix = 0;
    while (prefix < after.size() && !after[prefix].is_bottom()) ++prefix;
    for (std::uint32_t r = prefix; r < after.size(); ++r) {
      if (!after[r].is_bottom()) {
        add(out, kRegisterClaims, "claim-d", step,
            reg_name(r + 1) + " is non-bottom while " + reg_name(prefix + 1) + " is bottom");
        break;
      }
    }
  
    for (std::uint32_t other = 0; other < calls_.size(); ++other) {
      if (other != c && calls_[other].scanning) ++calls_[other].scan_writes;
    }
    if (events_.empty()) {
      note_write(out, effect.reg, step);
    } else {
      events_.push_back(encode(kWrite, effect.reg));
    }
  }
}

template <class Algo>
void Monitor<Algo>::observe_return(std::vector<Violation>& out, const StepEvent<Algo>& event,
                                   std::span<const Value> after, std::uint64_t step) {
  const std::uint32_t c = event.call_index;
  CallState& call = calls_[c];
  const Timestamp ts = *event.result.returned;
  const char* checker = Algo::kTag == Algorithm::Phase ? kOrdering : kSimpleAlgorithm;
  for (std::uint32_t a = 0; a < calls_.size(); ++a) {
    if (!(call.pred & bit(a))) continue;
    const Timestamp& before = *calls_[a].ts;
    if (!strictly_before(before, ts)) {
      add(out, checker, "order", step,
          to_string(workload_.call_id(a)) + " -> " + to_string(event.call) + " but " +
              to_string(before) + " is not before " + to_string(ts));
    }
  }
  if constexpr (Algo::kTag == Algorithm::Phase) {
    if (ts.rnd < 1 || ts.rnd > after.size() || after[ts.rnd - 1].is_bottom()) {
      add(out, kRegisterClaims, "claim-c", step,
          to_string(event.call) + " returned " + to_string(ts) + " with " + reg_name(ts.rnd) + " bottom");
    }
    if (call.anchored) {
      auto anchor = std::find(events_.begin(), events_.end(), encode(kAnchor, c));
      if (anchor != events_.end()) events_.erase(anchor);
      fold(out, step);
    }
  }
  call = CallState{};
  call.status = Status::Returned;
  call.ts = ts;
  returned_mask_ |= bit(c);
}

template <class Algo>
void Monitor<Algo>::fold(std::vector<Violation>& out, std::uint64_t step) {
  std::size_t i = 0;
  for (; i < events_.size(); ++i) {
    const std::uint16_t e = events_[i];
    const std::uint32_t kind = e >> 14;
    const std::uint32_t payload = e & 0x3FFF;
    if (kind == kAnchor) break;
    if (kind == kWrite) {
      note_write(out, payload, step);
    } else if (payload + 1 == phase_ + 1) {
      start_phase(out, payload + 1, step);
    } else if (payload + 1 > phase_ + 1) {
      add(out, kInvalidation, "phase-partition", step,
          "phase " + std::to_string(payload + 1) + " starts but phase " +
              std::to_string(phase_ + 1) + " never does");
    }
  }
  events_.erase(events_.begin(), events_.begin() + static_cast<std::ptrdiff_t>(i));
}

template <class Algo>
void Monitor<Algo>::start_phase(std::vector<Violation>& out, std::uint32_t phase, std::uint64_t step) {
  const auto count = static_cast<std::uint32_t>(std::popcount(phase_first_writes_));
  if (count != phase_) {
    add(out, kInvalidation, "phase-invalidation-count", step,
        "completed phase " + std::to_string(phase_) + " has " + std::to_string(count) +
            " invalidation writes");
  }
  phase_ = phase;
  phase_first_writes_ = 0;
  const std::uint64_t completed = phase_ - 1;
  if (completed * (completed + 1) / 2 > 2ull * workload_.total_calls() &&
      (completed - 1) * completed / 2 <= 2ull * workload_.total_calls()) {
    add(out, kSpace, "phase-count", step,
        std::to_string(completed) + " completed phases exceed the 2M invalidation budget");
  }
}

template <class Algo>
void Monitor<Algo>::note_write(std::vector<Violation>& out, std::uint32_t reg, std::uint64_t step) {
  if (reg < 1 || reg > phase_) {
    add(out, kInvalidation, "write-outside-prefix", step,
        "write to " + reg_name(reg) + " during phase " + std::to_string(phase_));
  }
  if (reg < 1 || reg > 64) return;
  if (!(phase_first_writes_ & bit(reg - 1))) {
    phase_first_writes_ |= bit(reg - 1);
    if (++invalidations_ == 2 * workload_.total_calls() + 1) {
      add(out, kInvalidation, "total-invalidations", step,
          "invalidation writes exceed 2M = " + std::to_string(2 * workload_.total_calls()));
    }
  }
}

template <class Algo>
void Monitor<Algo>::append_key(std::string& key) const {
  for (const CallState& call : calls_) {
    key.push_back(static_cast<char>(call.status));
    if (call.status == Status::Running) {
      detail::put_varint(key, call.pred);
      detail::put_varint(key, call.myrnd);
      detail::put_varint(key, call.while_iters);
      detail::put_varint(key, call.for_iters);
      detail::put_varint(key, call.writes);
      detail::put_varint(key, call.written);
      key.push_back(static_cast<char>((call.scanning ? 1 : 0) | (call.anchored ? 2 : 0)));
      if (call.scanning) {
        detail::put_signed(key, call.scan_writes + 2 - static_cast<std::int64_t>(call.scan_collects));
      }
    } else if (call.status == Status::Returned) {
      put_timestamp(key, *call.ts);
    }
  }
  if constexpr (Algo::kTag == Algorithm::Phase) {
    for (std::uint64_t lasts : written_lasts_) detail::put_varint(key, lasts);
    detail::put_varint(key, phase_);
    detail::put_varint(key, phase_first_writes_);
    detail::put_varint(key, invalidations_);
    detail::put_varint(key, events_.size());
    for (std::uint16_t e : events_) detail::put_varint(key, e);
  }
}

template class Monitor<SimpleAlgo>;
template class Monitor<PhaseAlgo>;

}  // namespace tsforge
