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

#include "tsforge/verify.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tsforge {

namespace {

constexpr std::size_t kNoCall = static_cast<std::size_t>(-1);

std::string reg_name(std::uint32_t reg) { return "R[" + std::to_string(reg) + "]"; }

// Dense lookup from call id to its position in trace.calls; ids outside the
// declared n x calls_per_process grid are left unresolved.
class CallLookup {
 public:
  explicit CallLookup(const Trace& trace)
      : n_(trace.n), k_(trace.calls_per_process),
        slot_(static_cast<std::size_t>(trace.n) * trace.calls_per_process, kNoCall) {
    for (std::size_t i = 0; i < trace.calls.size(); ++i) {
      const std::size_t d = dense(trace.calls[i].id);
      if (d != kNoCall && slot_[d] == kNoCall) slot_[d] = i;
    }
  }

  std::size_t dense(GetTsId id) const {
    if (id.process < 1 || id.process > n_ || id.seq < 1 || id.seq > k_) return kNoCall;
    return static_cast<std::size_t>(id.process - 1) * k_ + (id.seq - 1);
  }

  // Position in trace.calls, or kNoCall.
  std::size_t find(GetTsId id) const {
    const std::size_t d = dense(id);
    return d == kNoCall ? kNoCall : slot_[d];
  }

 private:
  std::uint32_t n_;
  std::uint32_t k_;
  std::vector<std::size_t> slot_;
};

const RegisterValue* phase_value(const Cell& cell) { return std::get_if<RegisterValue>(&cell); }

void require_phase(const Trace& trace, const char* checker) {
  if (trace.algo != Algorithm::Phase) {
    throw std::invalid_argument(std::string(checker) + " applies to phase-algorithm traces only");
  }
}

}  // namespace

void Verdict::add(std::string kind, std::optional<std::uint64_t> step, std::string detail) {
  violations.push_back(Violation{checker, std::move(kind), step, std::move(detail), std::nullopt});
}

nlohmann::ordered_json violation_to_json(const Violation& v) {
  nlohmann::ordered_json out;
  out["checker"] = v.checker;
  out["kind"] = v.kind;
  out["step"] = v.step ? nlohmann::ordered_json(*v.step) : nlohmann::ordered_json(nullptr);
  out["detail"] = v.detail;
  if (v.witness_schedule) out["witness_schedule"] = *v.witness_schedule;
  return out;
}

nlohmann::ordered_json verdict_to_json(const Verdict& verdict) {
  nlohmann::ordered_json out;
  out["checker"] = verdict.checker;
  out["pass"] = verdict.pass();
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const Violation& v : verdict.violations) list.push_back(violation_to_json(v));
  out["violations"] = std::move(list);
  if (!verdict.info.empty()) out["info"] = verdict.info;
  return out;
}

// ---------------------------------------------------------------------------
// Happens-before

HappensBefore::HappensBefore(const Trace& trace) {
  invoke_.reserve(trace.calls.size());
  response_.reserve(trace.calls.size());
  for (const CallRecord& c : trace.calls) {
    invoke_.push_back(c.invoke);
    response_.push_back(c.response);
  }
}

bool HappensBefore::precedes(std::size_t a, std::size_t b) const {
  return response_.at(a).has_value() && *response_[a] < invoke_.at(b);
}

// ---------------------------------------------------------------------------
// Ordering

Verdict check_ordering(const Trace& trace) {
  Verdict verdict{kOrdering, {}, {}};
  const HappensBefore hb(trace);
  const bool simple = trace.algo == Algorithm::Simple;

  auto ordered = [&](const AnyTimestamp& a, const AnyTimestamp& b) -> std::optional<bool> {
    if (simple) {
      const auto* ta = std::get_if<SimpleTimestamp>(&a);
      const auto* tb = std::get_if<SimpleTimestamp>(&b);
      if (!ta || !tb) return std::nullopt;
      return simple_compare(*ta, *tb) && !simple_compare(*tb, *ta);
    }
    const auto* ta = std::get_if<PhaseTimestamp>(&a);
    const auto* tb = std::get_if<PhaseTimestamp>(&b);
    if (!ta || !tb) return std::nullopt;
    return compare(*ta, *tb) && !compare(*tb, *ta);
  };

  for (std::size_t b = 0; b < trace.calls.size(); ++b) {
    const CallRecord& cb = trace.calls[b];
    if (!cb.timestamp) continue;
    for (std::size_t a = 0; a < trace.calls.size(); ++a) {
      if (a == b || !hb.precedes(a, b)) continue;
      const CallRecord& ca = trace.calls[a];
      if (!ca.timestamp) continue;
      const auto ok = ordered(*ca.timestamp, *cb.timestamp);
      if (!ok) {
        verdict.add("timestamp-type", cb.response,
                    to_string(ca.id) + " and " + to_string(cb.id) + " carry foreign timestamps");
      } else if (!*ok) {
        verdict.add("order", cb.response,
                    to_string(ca.id) + " -> " + to_string(cb.id) + " but " +
                        to_string(*ca.timestamp) + " is not before " + to_string(*cb.timestamp));
      }
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Register claims

Verdict check_register_claims(const Trace& trace) {
  require_phase(trace, kRegisterClaims);
  Verdict verdict{kRegisterClaims, {}, {}};
  std::vector<RegisterValue> regs(trace.m);
  std::vector<std::set<GetTsId>> written_lasts(trace.m);
  std::vector<std::pair<GetTsId, std::uint32_t>> returned;  // call, rnd

  const CallLookup lookup(trace);
  auto check_returned = [&](std::uint64_t step) {
    for (const auto& [id, rnd] : returned) {
      if (rnd < 1 || rnd > trace.m || regs[rnd - 1].is_bottom()) {
        verdict.add("claim-c", step,
                    to_string(id) + " returned round " + std::to_string(rnd) + " but " +
                        reg_name(rnd) + " is bottom");
      }
    }
  };

  for (const TraceStep& s : trace.steps) {
    bool became_bottom = false;
    if (s.op == AccessKind::Write) {
      const RegisterValue* value = phase_value(s.value);
      if (s.reg < 1 || s.reg > trace.m || value == nullptr) {
        verdict.add("out-of-range", s.index, "write to " + reg_name(s.reg));
        continue;
      }
      RegisterValue& slot = regs[s.reg - 1];
      if (value->is_bottom()) {
        if (!slot.is_bottom()) {
          verdict.add("claim-a", s.index, reg_name(s.reg) + " returned to bottom");
          became_bottom = true;
        }
      } else if (!written_lasts[s.reg - 1].insert(value->last()).second) {
        verdict.add("claim-b", s.index,
                    reg_name(s.reg) + " written twice with last(seq) = " + to_string(value->last()));
      }
      slot = *value;

      std::uint32_t prefix = 0;
      while (prefix < trace.m && !regs[prefix].is_bottom()) ++prefix;
      for (std::uint32_t r = prefix; r < trace.m; ++r) {
        if (!regs[r].is_bottom()) {
          verdict.add("claim-d", s.index,
                      reg_name(r + 1) + " is non-bottom while " + reg_name(prefix + 1) +
                          " is bottom");
          break;
        }
      }
    }

    const std::size_t ci = lookup.find(s.call);
    if (ci != kNoCall) {
      const CallRecord& call = trace.calls[ci];
      if (call.response == s.index && call.timestamp) {
        if (const auto* ts = std::get_if<PhaseTimestamp>(&*call.timestamp)) {
          returned.emplace_back(call.id, ts->rnd);
          const std::uint32_t rnd = ts->rnd;
          if (rnd < 1 || rnd > trace.m || regs[rnd - 1].is_bottom()) {
            verdict.add("claim-c", s.index,
                        to_string(call.id) + " returned " + to_string(*ts) + " with " +
                            reg_name(rnd) + " bottom");
          }
        }
      }
    }
    if (became_bottom) check_returned(s.index);
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Phases

std::uint32_t PhasePartition::completed_count() const noexcept {
  std::uint32_t count = 0;
  for (const Phase& p : phases) count += (p.completed && p.index >= 1) ? 1 : 0;
  return count;
}

std::uint32_t PhasePartition::total_invalidations() const noexcept {
  std::uint32_t total = 0;
  for (const Phase& p : phases) total += static_cast<std::uint32_t>(p.first_writes.size());
  return total;
}

const Phase& PhasePartition::phase_of(std::uint64_t step) const {
  auto it = std::upper_bound(phases.begin(), phases.end(), step,
                             [](std::uint64_t s, const Phase& p) { return s < p.start; });
  if (it == phases.begin()) throw std::out_of_range("step precedes phase 0");
  return *std::prev(it);
}

bool operator==(const PhasePartition& a, const PhasePartition& b) {
  if (a.phases.size() != b.phases.size()) return false;
  for (std::size_t i = 0; i < a.phases.size(); ++i) {
    const Phase& x = a.phases[i];
    const Phase& y = b.phases[i];
    if (x.index != y.index || x.start != y.start || x.end != y.end ||
        x.completed != y.completed || x.first_writes != y.first_writes ||
        x.invalidation_steps != y.invalidation_steps) {
      return false;
    }
  }
  return true;
}

PhasePartition compute_phases(const Trace& trace) {
  require_phase(trace, "compute_phases");
  const CallLookup lookup(trace);
  std::map<std::uint32_t, std::uint64_t> starts;  // phase -> first linearization step

  for (const ScanRecord& scan : trace.scans) {
    for (std::size_t i = 0; i < scan.collects.size(); ++i) {
      const CollectWindow& w = scan.collects[i];
      if (w.first > w.last || (i > 0 && scan.collects[i - 1].last >= w.first)) {
        throw MalformedTrace("scan of " + to_string(scan.call) + ": collect windows out of order");
      }
    }
    if (!scan.complete) continue;
    if (scan.collects.size() < 2) {
      throw MalformedTrace("complete scan of " + to_string(scan.call) + " has fewer than two collects");
    }
    const std::uint64_t lin = scan.collects[scan.collects.size() - 2].last + 1;
    if (scan.linearization && *scan.linearization != lin) {
      throw MalformedTrace("scan of " + to_string(scan.call) + " records linearization " +
                           std::to_string(*scan.linearization) + ", collects imply " +
                           std::to_string(lin));
    }
    const std::size_t ci = lookup.find(scan.call);
    if (ci == kNoCall || !trace.calls[ci].myrnd) {
      throw MalformedTrace("scan of " + to_string(scan.call) + " has no call record with myrnd");
    }
    const std::uint32_t phase = *trace.calls[ci].myrnd + 1;
    auto [it, inserted] = starts.emplace(phase, lin);
    if (!inserted) it->second = std::min(it->second, lin);
  }

  PhasePartition partition;
  partition.phases.push_back(Phase{0, 0, 0, false, {}, {}});
  std::uint32_t expected = 1;
  for (const auto& [phase, start] : starts) {
    if (phase != expected) {
      throw MalformedTrace("phase " + std::to_string(phase) + " starts but phase " +
                           std::to_string(expected) + " never does");
    }
    if (start <= partition.phases.back().start && phase > 1) {
      throw MalformedTrace("phase " + std::to_string(phase) + " starts before phase " +
                           std::to_string(phase - 1));
    }
    partition.phases.back().end = start;
    partition.phases.back().completed = true;
    partition.phases.push_back(Phase{phase, start, 0, false, {}, {}});
    ++expected;
  }
  partition.phases.back().end = trace.steps.size();

  std::size_t current = 0;
  std::vector<std::uint32_t> last_phase_written(trace.m + 1, static_cast<std::uint32_t>(-1));
  for (const TraceStep& s : trace.steps) {
    while (current + 1 < partition.phases.size() && s.index >= partition.phases[current + 1].start) {
      ++current;
    }
    if (s.op != AccessKind::Write) continue;
    Phase& phase = partition.phases[current];
    if (s.reg >= last_phase_written.size()) last_phase_written.resize(s.reg + 1, static_cast<std::uint32_t>(-1));
    if (last_phase_written[s.reg] != phase.index) {
      last_phase_written[s.reg] = phase.index;
      phase.first_writes.push_back(s.reg);
      phase.invalidation_steps.push_back(s.index);
    }
  }
  return partition;
}

Verdict check_invalidation_accounting(const Trace& trace, const PhasePartition& partition) {
  require_phase(trace, kInvalidation);
  Verdict verdict{kInvalidation, {}, {}};
  for (const TraceStep& s : trace.steps) {
    if (s.op != AccessKind::Write) continue;
    const Phase& phase = partition.phase_of(s.index);
    if (s.reg < 1 || s.reg > phase.index) {
      verdict.add("write-outside-prefix", s.index,
                  "write to " + reg_name(s.reg) + " during phase " + std::to_string(phase.index));
    }
  }
  for (const Phase& phase : partition.phases) {
    const auto count = phase.first_writes.size();
    if (phase.completed) {
      if (count != phase.index) {
        verdict.add("phase-invalidation-count", phase.end,
                    "completed phase " + std::to_string(phase.index) + " has " +
                        std::to_string(count) + " invalidation writes");
      }
    } else {
      verdict.info.push_back("incomplete phase " + std::to_string(phase.index) + ": " +
                             std::to_string(count) + " invalidation writes");
    }
  }
  const std::uint64_t total = partition.total_invalidations();
  if (total > 2ull * trace.total_calls) {
    verdict.add("total-invalidations", std::nullopt,
                std::to_string(total) + " invalidation writes exceed 2M = " +
                    std::to_string(2ull * trace.total_calls));
  }
  return verdict;
}

Verdict check_invalidation_accounting(const Trace& trace) {
  require_phase(trace, kInvalidation);
  try {
    return check_invalidation_accounting(trace, compute_phases(trace));
  } catch (const MalformedTrace& e) {
    Verdict verdict{kInvalidation, {}, {}};
    verdict.add("phase-partition", std::nullopt, e.what());
    return verdict;
  }
}

// ---------------------------------------------------------------------------
// Space

Verdict check_space(const Trace& trace) {
  require_phase(trace, kSpace);
  Verdict verdict{kSpace, {}, {}};
  const std::uint32_t bound = phase_register_bound(trace.total_calls);
  if (trace.stats.overflow_reg) {
    verdict.add("register-overflow", trace.steps.size(),
                "access to " + reg_name(*trace.stats.overflow_reg) + " beyond the array of " +
                    std::to_string(trace.m));
  }
  bool reported_access = false;
  bool reported_write = false;
  for (const TraceStep& s : trace.steps) {
    if (s.reg > bound && !reported_access) {
      verdict.add("accessed-beyond-bound", s.index,
                  reg_name(s.reg) + " accessed; bound is " + std::to_string(bound));
      reported_access = true;
    }
    if (s.op == AccessKind::Write && s.reg + 1 > bound && !reported_write) {
      verdict.add("written-beyond-bound", s.index,
                  reg_name(s.reg) + " written; bound is " + std::to_string(bound - 1));
      reported_write = true;
    }
  }
  try {
    const std::uint64_t phi = compute_phases(trace).completed_count();
    if (phi * (phi + 1) / 2 > 2ull * trace.total_calls) {
      verdict.add("phase-count", std::nullopt,
                  std::to_string(phi) + " completed phases exceed the 2M invalidation budget");
    }
    verdict.info.push_back("completed phases: " + std::to_string(phi));
  } catch (const MalformedTrace& e) {
    verdict.add("phase-partition", std::nullopt, e.what());
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Wait-freedom

Verdict check_wait_freedom(const Trace& trace) {
  require_phase(trace, kWaitFreedom);
  Verdict verdict{kWaitFreedom, {}, {}};
  const CallLookup lookup(trace);
  const std::uint32_t m = trace.m;

  if (trace.stats.budget_exhausted) {
    verdict.add("budget-exhausted", trace.steps.size(), "run stopped by its step budget");
  }

  struct Counters {
    std::uint32_t while_iters = 0;
    std::uint32_t for_iters = 0;
    std::uint32_t writes = 0;
    std::set<std::uint32_t> written;
  };
  std::vector<Counters> counters(trace.calls.size());
  std::vector<std::uint64_t> writes_before(trace.steps.size() + 1, 0);

  for (const TraceStep& s : trace.steps) {
    writes_before[s.index + 1] = writes_before[s.index] + (s.op == AccessKind::Write ? 1 : 0);
    const std::size_t ci = lookup.find(s.call);
    if (ci == kNoCall) continue;
    Counters& c = counters[ci];
    const std::string who = to_string(s.call);
    if (s.op == AccessKind::Read && s.line == 1) {
      const RegisterValue* v = phase_value(s.value);
      if (v != nullptr && !v->is_bottom() && ++c.while_iters == m) {
        verdict.add("while-iterations", s.index, who + " iterated the while-loop m times");
      }
    } else if (s.op == AccessKind::Read && s.line == 6) {
      if (++c.for_iters == m - 1) {
        verdict.add("for-iterations", s.index, who + " iterated the for-loop m-1 times");
      }
    } else if (s.op == AccessKind::Write) {
      if (++c.writes == m) verdict.add("writes-per-call", s.index, who + " wrote m times");
      if (!c.written.insert(s.reg).second) {
        verdict.add("repeated-register-write", s.index, who + " wrote " + reg_name(s.reg) + " twice");
      }
    }
  }

  for (const ScanRecord& scan : trace.scans) {
    if (scan.collects.empty()) continue;
    const std::uint64_t first = scan.collects.front().first;
    const std::uint64_t last = scan.collects.back().last;
    if (last >= trace.steps.size() || first > last) continue;  // well_formed reports these
    std::uint64_t interfering = writes_before[last + 1] - writes_before[first];
    for (std::uint64_t i = first; i <= last; ++i) {
      // Own writes inside the window are not interference.
      const TraceStep& s = trace.steps[i];
      if (s.call == scan.call && s.op == AccessKind::Write) --interfering;
      if (s.call == scan.call && i > first && s.line == 13 && s.op == AccessKind::Read) {
        // Skip ahead over this call's own reads cheaply: nothing to do.
      }
    }
    std::uint64_t collects = scan.collects.size();
    std::uint64_t allowed = interfering + 2;
    if (!scan.complete) {
      // The last window may be a partial collect.
      std::uint64_t reads = 0;
      for (std::uint64_t i = first; i <= last; ++i) {
        const TraceStep& s = trace.steps[i];
        reads += (s.call == scan.call && s.line == 13) ? 1 : 0;
      }
      collects = m == 0 ? 0 : reads / m;
      allowed = interfering + 1;
    }
    if (collects > allowed) {
      verdict.add("scan-collects", last,
                  "scan of " + to_string(scan.call) + " took " + std::to_string(collects) +
                      " collects with " + std::to_string(interfering) + " interfering writes");
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Simple algorithm

Verdict check_simple_algorithm(const Trace& trace) {
  if (trace.algo != Algorithm::Simple) {
    throw std::invalid_argument("check_simple_algorithm applies to simple-algorithm traces only");
  }
  Verdict verdict{kSimpleAlgorithm, {}, {}};
  if (trace.m != simple_register_count(trace.n)) {
    verdict.add("register-count", std::nullopt,
                "m = " + std::to_string(trace.m) + " but ceil(n/2) = " +
                    std::to_string(simple_register_count(trace.n)));
  }
  std::vector<std::uint32_t> regs(trace.m, 0);
  std::vector<std::uint32_t> writes_by(trace.n + 1, 0);
  for (const TraceStep& s : trace.steps) {
    if (s.op != AccessKind::Write) continue;
    const auto* value = std::get_if<SimpleRegisterValue>(&s.value);
    if (value == nullptr || s.reg < 1 || s.reg > trace.m) {
      verdict.add("out-of-range", s.index, "write to " + reg_name(s.reg));
      continue;
    }
    if (value->value > 2) {
      verdict.add("value-range", s.index, reg_name(s.reg) + " := " + std::to_string(value->value));
    }
    if (value->value < regs[s.reg - 1]) {
      verdict.add("monotonicity", s.index,
                  reg_name(s.reg) + " decreased from " + std::to_string(regs[s.reg - 1]) + " to " +
                      std::to_string(value->value));
    }
    if (s.reg != (s.pid + 1) / 2) {
      verdict.add("foreign-register", s.index,
                  "p" + std::to_string(s.pid) + " wrote " + reg_name(s.reg));
    }
    if (s.pid >= 1 && s.pid <= trace.n && ++writes_by[s.pid] == 2) {
      verdict.add("repeated-write", s.index, "p" + std::to_string(s.pid) + " wrote twice");
    }
    regs[s.reg - 1] = value->value;
  }
  Verdict ordering = check_ordering(trace);
  for (Violation& v : ordering.violations) {
    v.checker = kSimpleAlgorithm;
    verdict.violations.push_back(std::move(v));
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Well-formedness

Verdict check_well_formed(const Trace& trace) {
  Verdict verdict{kWellFormed, {}, {}};
  const CallLookup lookup(trace);
  const bool simple = trace.algo == Algorithm::Simple;

  for (std::size_t i = 0; i < trace.calls.size(); ++i) {
    const CallRecord& c = trace.calls[i];
    if (lookup.dense(c.id) == kNoCall) {
      verdict.add("call-id", c.invoke, to_string(c.id) + " outside the declared workload");
    } else if (lookup.find(c.id) != i) {
      verdict.add("call-id", c.invoke, to_string(c.id) + " recorded twice");
    }
    if (c.response && *c.response < c.invoke) {
      verdict.add("call-interval", c.invoke, to_string(c.id) + " responds before it is invoked");
    }
    if (c.response.has_value() != c.timestamp.has_value()) {
      verdict.add("call-interval", c.invoke, to_string(c.id) + " has a response without timestamp or vice versa");
    }
    if (c.invoke >= trace.steps.size() || trace.steps[c.invoke].call != c.id) {
      verdict.add("call-interval", c.invoke, to_string(c.id) + " invocation step is not its own");
    }
    if (c.response && (*c.response >= trace.steps.size() || trace.steps[*c.response].call != c.id)) {
      verdict.add("call-interval", c.response, to_string(c.id) + " response step is not its own");
    }
    if (!simple && c.timestamp) {
      if (const auto* ts = std::get_if<PhaseTimestamp>(&*c.timestamp); ts && ts->turn + 1 > ts->rnd) {
        verdict.add("timestamp-shape", c.response, to_string(*ts) + " has turn >= rnd");
      }
    }
  }

  // Scan lookup by linearization step for the soundness check.
  std::multimap<std::uint64_t, const ScanRecord*> by_lin;
  for (const ScanRecord& scan : trace.scans) {
    if (scan.complete && scan.collects.size() >= 2) {
      by_lin.emplace(scan.collects[scan.collects.size() - 2].last + 1, &scan);
    }
  }

  std::vector<Cell> regs(trace.m, simple ? Cell(SimpleRegisterValue{}) : Cell(RegisterValue{}));
  auto check_scans_at = [&](std::uint64_t step) {
    auto [lo, hi] = by_lin.equal_range(step);
    for (auto it = lo; it != hi; ++it) {
      const ScanRecord& scan = *it->second;
      const CollectWindow& lastw = scan.collects.back();
      std::uint32_t reg = 1;
      for (std::uint64_t i = lastw.first; i <= lastw.last && i < trace.steps.size(); ++i) {
        const TraceStep& s = trace.steps[i];
        if (s.call != scan.call) continue;
        if (reg <= trace.m && !(s.value == regs[reg - 1])) {
          verdict.add("scan-soundness", step,
                      "scan of " + to_string(scan.call) + " returned " + to_string(s.value) +
                          " for " + reg_name(reg) + ", memory holds " + to_string(regs[reg - 1]));
        }
        ++reg;
      }
    }
  };

  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& s = trace.steps[i];
    check_scans_at(i);
    if (s.index != i) {
      verdict.add("step-index", i, "step " + std::to_string(i) + " carries index " + std::to_string(s.index));
    }
    if (s.pid != s.call.process) {
      verdict.add("step-pid", i, "step by p" + std::to_string(s.pid) + " attributed to " + to_string(s.call));
    }
    const std::size_t ci = lookup.find(s.call);
    if (ci == kNoCall) {
      verdict.add("step-call", i, to_string(s.call) + " has no call record");
    } else {
      const CallRecord& c = trace.calls[ci];
      if (i < c.invoke || (c.response && i > *c.response)) {
        verdict.add("step-call", i, "step outside the interval of " + to_string(s.call));
      }
    }
    if (s.reg < 1 || s.reg > trace.m) {
      verdict.add("out-of-range", i, reg_name(s.reg) + " outside the array of " + std::to_string(trace.m));
      continue;
    }
    if (s.value.index() != regs[s.reg - 1].index()) {
      verdict.add("value-type", i, "value of the wrong algorithm");
      continue;
    }
    if (s.op == AccessKind::Read) {
      if (!(s.value == regs[s.reg - 1])) {
        verdict.add("read-value", i,
                    "read of " + reg_name(s.reg) + " returned " + to_string(s.value) +
                        ", history holds " + to_string(regs[s.reg - 1]));
      }
    } else {
      regs[s.reg - 1] = s.value;
    }
  }
  check_scans_at(trace.steps.size());

  if (!simple) {
    for (const ScanRecord& scan : trace.scans) {
      const std::size_t ci = lookup.find(scan.call);
      if (ci == kNoCall) {
        verdict.add("scan-record", std::nullopt, "scan of unknown call " + to_string(scan.call));
        continue;
      }
      // Each collect must be m line-13 reads of R[1..m] in order by the caller.
      for (const CollectWindow& w : scan.collects) {
        std::uint32_t expect = 1;
        for (std::uint64_t i = w.first; i <= w.last && i < trace.steps.size(); ++i) {
          const TraceStep& s = trace.steps[i];
          if (s.call != scan.call) continue;
          if (s.op != AccessKind::Read || s.line != 13 || s.reg != expect) {
            verdict.add("scan-record", i, "collect of " + to_string(scan.call) + " is not a sweep of R[1..m]");
            break;
          }
          ++expect;
        }
        if (w.last >= trace.steps.size()) {
          verdict.add("scan-record", w.last, "collect window past the end of the trace");
        }
      }
      if (scan.complete) {
        const auto k = scan.collects.size();
        if (k < 2) {
          verdict.add("scan-record", std::nullopt, "complete scan of " + to_string(scan.call) + " has < 2 collects");
          continue;
        }
        const std::uint64_t lin = scan.collects[k - 2].last + 1;
        if (scan.linearization && *scan.linearization != lin) {
          verdict.add("scan-record", lin, "scan of " + to_string(scan.call) + " has a wrong linearization step");
        }
      }
    }
  }
  return verdict;
}

// ---------------------------------------------------------------------------

std::vector<Verdict> run_all_checkers(const Trace& trace) {
  std::vector<Verdict> out;
  out.push_back(check_well_formed(trace));
  if (trace.algo == Algorithm::Simple) {
    out.push_back(check_simple_algorithm(trace));
    return out;
  }
  out.push_back(check_ordering(trace));
  out.push_back(check_register_claims(trace));
  out.push_back(check_space(trace));
  out.push_back(check_wait_freedom(trace));
  try {
    out.push_back(check_invalidation_accounting(trace, compute_phases(trace)));
  } catch (const MalformedTrace& e) {
    Verdict v{kInvalidation, {}, {}};
    v.add("phase-partition", std::nullopt, e.what());
    out.push_back(std::move(v));
  }
  return out;
}

bool all_pass(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass(); });
}

}  // namespace tsforge
