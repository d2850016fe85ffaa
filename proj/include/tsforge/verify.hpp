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

// File: tsforge/verify.hpp - Post-hoc trace checkers. Every checker is a pure
// function of a Trace and reports all violations it finds, each tagged with
// the step index where it became visible.

#ifndef TSFORGE_VERIFY_HPP_
#define TSFORGE_VERIFY_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsforge/trace.hpp"

namespace tsforge {

struct Violation {
  std::string checker;
  std::string kind;
  std::optional<std::uint64_t> step;
  std::string detail;
  std::optional<std::vector<std::uint32_t>> witness_schedule;
};

struct Verdict {
  std::string checker;
  std::vector<Violation> violations;
  std::vector<std::string> info;  // informational notes, never failures

  bool pass() const noexcept { return violations.empty(); }
  void add(std::string kind, std::optional<std::uint64_t> step, std::string detail);
};

nlohmann::ordered_json verdict_to_json(const Verdict& verdict);
nlohmann::ordered_json violation_to_json(const Violation& violation);

// Scan or phase records that cannot be interpreted.
class MalformedTrace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// a -> b iff the response of a precedes the invocation of b. Indices refer
// to trace.calls.
class HappensBefore {
 public:
  explicit HappensBefore(const Trace& trace);

  bool precedes(std::size_t a, std::size_t b) const;
  std::size_t size() const noexcept { return invoke_.size(); }

 private:
  std::vector<std::uint64_t> invoke_;
  std::vector<std::optional<std::uint64_t>> response_;
};

struct Phase {
  std::uint32_t index = 0;
  std::uint64_t start = 0;
  std::uint64_t end = 0;  // exclusive
  bool completed = false;  // the next phase started within the trace
  std::vector<std::uint32_t> first_writes;  // registers, in order of their invalidation write
  std::vector<std::uint64_t> invalidation_steps;
};

struct PhasePartition {
  std::vector<Phase> phases;  // phases[k].index == k

  // Completed phases with index >= 1.
  std::uint32_t completed_count() const noexcept;
  std::uint32_t total_invalidations() const noexcept;
  const Phase& phase_of(std::uint64_t step) const;

  friend bool operator==(const PhasePartition& a, const PhasePartition& b);
};

// Phase k >= 1 starts at the linearization step of the first complete scan
// whose caller has myrnd = k - 1; a scan linearizes right after the final
// read of its penultimate collect. Throws MalformedTrace on bad scan records
// and when phases do not start in increasing order without gaps.
PhasePartition compute_phases(const Trace& trace);

// Names under which the checkers report.
inline constexpr const char* kOrdering = "ordering";
inline constexpr const char* kRegisterClaims = "register_claims";
inline constexpr const char* kInvalidation = "invalidation_accounting";
inline constexpr const char* kSpace = "space";
inline constexpr const char* kWaitFreedom = "wait_freedom";
inline constexpr const char* kSimpleAlgorithm = "simple_algorithm";
inline constexpr const char* kWellFormed = "well_formed";

// Completed calls a -> b must satisfy compare(t_a, t_b) && !compare(t_b, t_a)
// (simple_compare for the simple algorithm).
Verdict check_ordering(const Trace& trace);

// Replays register history of a phase trace: (a) a non-bottom register never
// becomes bottom, (b) every write to a register carries a fresh last(seq),
// (c) after a call returns (rnd, turn), R[rnd] is non-bottom, (d) non-bottom
// registers form a prefix.
Verdict check_register_claims(const Trace& trace);

// Writes during phase k touch only R[1..k]; a completed phase k has exactly k
// invalidation writes (first write to a register within the phase); at most
// 2M invalidation writes overall.
Verdict check_invalidation_accounting(const Trace& trace, const PhasePartition& phases);
Verdict check_invalidation_accounting(const Trace& trace);

// Accessed registers <= ceil(2 sqrt M), written <= ceil(2 sqrt M) - 1, and
// the completed-phase count P satisfies P(P+1)/2 <= 2M.
Verdict check_space(const Trace& trace);

// Per call: while-loop iterations <= m-1, for-loop iterations <= m-2,
// writes <= m-1 with no register written twice; per scan: collects <=
// (writes by other calls during the scan) + 2.
Verdict check_wait_freedom(const Trace& trace);

// Simple algorithm: register values stay in {0,1,2} and never decrease, each
// process writes only R[ceil(p/2)] and at most once, plus ordering.
Verdict check_simple_algorithm(const Trace& trace);

// Structural consistency: dense step indices, steps inside their call's
// interval, reads returning the replayed register contents, and complete
// scans whose view equals memory at their linearization step.
Verdict check_well_formed(const Trace& trace);

// All checkers that apply to the trace's algorithm.
std::vector<Verdict> run_all_checkers(const Trace& trace);

bool all_pass(const std::vector<Verdict>& verdicts);

}  // namespace tsforge

#endif  // TSFORGE_VERIFY_HPP_
