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

#include <algorithm>
#include <random>
#include <string>

#include "doctest.h"
#include "oracle.hpp"
#include "tsforge/simulator.hpp"
#include "tsforge/trace_json.hpp"
#include "tsforge/verify.hpp"

using namespace tsforge;

namespace {

const Verdict& verdict_of(const std::vector<Verdict>& verdicts, const std::string& checker) {
  for (const Verdict& v : verdicts) {
    if (v.checker == checker) return v;
  }
  FAIL("no verdict for " << checker);
  return verdicts.front();
}

bool has_kind(const Verdict& v, const std::string& kind) {
  return std::any_of(v.violations.begin(), v.violations.end(),
                     [&](const Violation& x) { return x.kind == kind; });
}

Trace forged(const std::string& name) {
  return load_trace_file(std::string(TSFORGE_TEST_DATA) + "/forged/" + name + ".json");
}

Trace sequential(std::uint32_t n, std::uint32_t k = 1) {
  return run_to_completion({Algorithm::Phase, n, k, 0}, Policy::Sequential, 0);
}

}  // namespace

TEST_CASE("ordering on a sequential two-call trace") {
  const Trace trace = sequential(2);
  CHECK(trace.calls[0].timestamp == AnyTimestamp(PhaseTimestamp{1, 0}));
  CHECK(trace.calls[1].timestamp == AnyTimestamp(PhaseTimestamp{2, 0}));
  CHECK(check_ordering(trace).pass());
  CHECK(check_ordering(sequential(1)).pass());
}

TEST_CASE("phases of a sequential one-call trace") {
  const PhasePartition phases = compute_phases(sequential(1));
  REQUIRE(phases.phases.size() == 2);
  CHECK(phases.phases[0].start == 0);
  CHECK(phases.phases[1].start == 3);
  CHECK_FALSE(phases.phases[1].completed);
  CHECK(phases.completed_count() == 0);
  CHECK(check_invalidation_accounting(sequential(1)).pass());
}

TEST_CASE("trace without scans is a single phase 0") {
  const Trace trace = run_schedule({Algorithm::Phase, 2, 1, 0}, std::vector<std::uint32_t>{1, 2});
  const PhasePartition phases = compute_phases(trace);
  REQUIRE(phases.phases.size() == 1);
  CHECK(phases.phases[0].index == 0);
  CHECK(phases.phases[0].start == 0);
}

TEST_CASE("phases of the sequential seven-call trace") {
  const Trace trace = sequential(7);
  const PhasePartition phases = compute_phases(trace);
  REQUIRE(phases.phases.size() == 5);
  for (std::uint32_t phi = 1; phi <= 3; ++phi) {
    CHECK(phases.phases[phi].completed);
    CHECK(phases.phases[phi].first_writes.size() == phi);
    for (std::uint32_t reg : phases.phases[phi].first_writes) CHECK(reg <= phi);
  }
  CHECK(phases.completed_count() == 3);
  CHECK(phases.total_invalidations() <= 14);

  // Phase starts coincide with the scans of the calls that return (k,0).
  oracle::PhaseInterpreter interp(trace.m);
  std::uint32_t next_phase = 1;
  for (std::uint32_t p = 1; p <= 7; ++p) {
    const auto [rnd, turn] = interp.get_ts({p, 1});
    if (turn != 0) continue;
    const auto& scan = *std::find_if(trace.scans.begin(), trace.scans.end(),
                                     [&](const ScanRecord& s) { return s.call == GetTsId{p, 1}; });
    CHECK(phases.phases[next_phase].start == *scan.linearization);
    CHECK(rnd == next_phase);
    ++next_phase;
  }
  CHECK(check_invalidation_accounting(trace).pass());
}

TEST_CASE("space bound examples") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Trace t4 = run_to_completion({Algorithm::Phase, 4, 1, 0}, Policy::Random, rng());
    CHECK(t4.stats.max_reg_accessed <= 4);
    CHECK(t4.stats.max_reg_written <= 3);
    CHECK(check_space(t4).pass());
  }
  const Trace t1 = sequential(1);
  CHECK(t1.stats.max_reg_accessed <= 2);
  CHECK(t1.stats.max_reg_written <= 1);
  const Trace t16 = run_to_completion({Algorithm::Phase, 16, 1, 0}, Policy::Random, 5);
  CHECK(t16.stats.max_reg_accessed <= 8);
  CHECK(check_space(t16).pass());
}

TEST_CASE("solo call scans in exactly two collects") {
  const Trace trace = sequential(5);
  for (const ScanRecord& scan : trace.scans) CHECK(scan.collects.size() == 2);
  CHECK(check_wait_freedom(trace).pass());
}

TEST_CASE("adversarial n=4 runs respect the collect bound") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Trace trace = run_to_completion({Algorithm::Phase, 4, 1, 0}, Policy::AdversarialLongestScan, seed);
    CHECK(check_wait_freedom(trace).pass());
  }
}

TEST_CASE("sequential simple trace ends with both registers at their sums") {
  const Trace trace = run_to_completion({Algorithm::Simple, 2, 1, 0}, Policy::Sequential, 0);
  CHECK(trace.calls[0].timestamp == AnyTimestamp(SimpleTimestamp{1}));
  CHECK(trace.calls[1].timestamp == AnyTimestamp(SimpleTimestamp{2}));
  CHECK(std::get<SimpleRegisterValue>(trace.steps.back().value).value == 2);
  CHECK(check_simple_algorithm(trace).pass());
}

TEST_CASE("all checkers pass on random runs") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 400; ++trial) {
    const bool simple = trial % 4 == 0;
    const std::uint32_t n = 1 + rng() % (simple ? 9 : 10);
    const std::uint32_t k = simple ? 1 : 1 + rng() % 3;
    const Policy policy = trial % 3 ? Policy::Random : Policy::AdversarialLongestScan;
    const Trace trace = run_to_completion({simple ? Algorithm::Simple : Algorithm::Phase, n, k, 0}, policy, rng());
    const auto verdicts = run_all_checkers(trace);
    for (const Verdict& v : verdicts) {
      INFO(v.checker << " n=" << n << " k=" << k);
      CHECK(v.pass());
    }
  }
}

TEST_CASE("checkers are pure and commute") {
  const Trace trace = run_to_completion({Algorithm::Phase, 6, 2, 0}, Policy::Random, 3);
  const auto a = run_all_checkers(trace);
  const auto b = run_all_checkers(trace);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(verdict_to_json(a[i]).dump() == verdict_to_json(b[i]).dump());
  }
  const Trace bad = forged("claims_gap");
  const auto x = verdict_to_json(check_space(bad)).dump();
  check_register_claims(bad);
  check_invalidation_accounting(bad);
  CHECK(verdict_to_json(check_space(bad)).dump() == x);
}

TEST_CASE("phase partition is stable under replay") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Workload w{Algorithm::Phase, 2 + static_cast<std::uint32_t>(rng() % 8), 1 + static_cast<std::uint32_t>(rng() % 2), 0};
    const Trace trace = run_to_completion(w, Policy::Random, rng());
    const Trace replay = run_schedule(w, trace.schedule());
    CHECK(compute_phases(trace) == compute_phases(replay));
  }
}

TEST_CASE("completed phases carry exactly phi invalidation writes") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const Workload w{Algorithm::Phase, 2 + static_cast<std::uint32_t>(rng() % 12), 1, 0};
    const Trace trace = run_to_completion(w, Policy::Random, rng());
    const PhasePartition phases = compute_phases(trace);
    std::uint32_t total = 0;
    for (const Phase& phase : phases.phases) {
      total += static_cast<std::uint32_t>(phase.first_writes.size());
      if (phase.index >= 1 && phase.completed) CHECK(phase.first_writes.size() == phase.index);
      for (std::uint32_t reg : phase.first_writes) CHECK(reg <= std::max<std::uint32_t>(phase.index, 1));
    }
    CHECK(total <= 2 * w.total_calls());
    const std::uint32_t big_phi = phases.completed_count();
    CHECK(big_phi * (big_phi + 1) / 2 <= 2 * w.total_calls());
  }
}

TEST_CASE("malformed scan records are rejected by compute_phases") {
  Trace trace = sequential(2);
  trace.scans[0].linearization = *trace.scans[0].linearization + 1;
  CHECK_THROWS_AS(compute_phases(trace), MalformedTrace);
  Trace reversed = sequential(2);
  std::swap(reversed.scans[0].collects[0], reversed.scans[0].collects[1]);
  CHECK_THROWS_AS(compute_phases(reversed), MalformedTrace);
}

TEST_CASE("forged traces are rejected by their checker") {
  struct Case {
    const char* file;
    const char* checker;
    const char* kind;
  };
  const Case cases[] = {
      {"ordering_swapped", kOrdering, "order"},
      {"claims_bottom_write", kRegisterClaims, "claim-a"},
      {"claims_gap", kRegisterClaims, "claim-d"},
      {"invalidation_outside_prefix", kInvalidation, "write-outside-prefix"},
      {"space_sentinel_write", kSpace, "written-beyond-bound"},
      {"wait_freedom_extra_collect", kWaitFreedom, "scan-collects"},
      {"simple_decrement", kSimpleAlgorithm, "monotonicity"},
      {"simple_value_three", kSimpleAlgorithm, "value-range"},
      {"read_mismatch", kWellFormed, "read-value"},
  };
  for (const Case& c : cases) {
    INFO(c.file);
    const auto verdicts = run_all_checkers(forged(c.file));
    const Verdict& v = verdict_of(verdicts, c.checker);
    CHECK_FALSE(v.pass());
    CHECK(has_kind(v, c.kind));
    CHECK_FALSE(all_pass(verdicts));
  }
}

TEST_CASE("swapped-timestamp violation names the pair") {
  const Verdict v = check_ordering(forged("ordering_swapped"));
  REQUIRE(v.violations.size() == 1);
  CHECK(v.violations[0].detail.find("p1.1") != std::string::npos);
  CHECK(v.violations[0].detail.find("p2.1") != std::string::npos);
}

TEST_CASE("mutated write values break a checker") {
  std::mt19937_64 rng(31);
  int caught = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Trace trace = run_to_completion({Algorithm::Phase, 2 + static_cast<std::uint32_t>(rng() % 5), 1, 0}, Policy::Random, rng());
    std::vector<std::size_t> writes;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      if (trace.steps[i].op == AccessKind::Write) writes.push_back(i);
    }
    TraceStep& s = trace.steps[writes[rng() % writes.size()]];
    s.value = RegisterValue();
    const auto verdicts = run_all_checkers(trace);
    if (!all_pass(verdicts)) ++caught;
  }
  CHECK(caught == 200);
}

TEST_CASE("simple checker catches repeated and foreign writes") {
  Trace trace = run_to_completion({Algorithm::Simple, 4, 1, 0}, Policy::Sequential, 0);
  for (TraceStep& s : trace.steps) {
    if (s.op == AccessKind::Write && s.pid == 3) s.reg = 1;
  }
  CHECK(has_kind(check_simple_algorithm(trace), "foreign-register"));
}

TEST_CASE("verdict JSON shape") {
  const auto doc = verdict_to_json(check_ordering(forged("ordering_swapped")));
  CHECK(doc["checker"] == "ordering");
  CHECK(doc["pass"] == false);
  CHECK(doc["violations"][0].contains("kind"));
  CHECK(doc["violations"][0].contains("step"));
  CHECK(doc["violations"][0].contains("detail"));
}
