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

#include <random>

#include "doctest.h"
#include "tsforge/simulator.hpp"
#include "tsforge/trace_json.hpp"
#include "tsforge/verify.hpp"

using namespace tsforge;

namespace {

std::vector<std::uint32_t> random_schedule(const Workload& w, std::mt19937_64& rng) {
  return run_to_completion(w, Policy::Random, rng()).schedule();
}

}  // namespace

TEST_CASE("solo phase call returns (1,0)") {
  const std::vector<std::uint32_t> schedule(6, 1);
  const Trace trace = run_schedule({Algorithm::Phase, 1, 1, 0}, schedule);
  REQUIRE(trace.calls.size() == 1);
  CHECK(trace.calls[0].timestamp == AnyTimestamp(PhaseTimestamp{1, 0}));
  CHECK(trace.calls[0].invoke == 0);
  CHECK(trace.calls[0].response == 5u);
  CHECK(trace.calls[0].myrnd == 0u);
  REQUIRE(trace.scans.size() == 1);
  CHECK(trace.scans[0].complete);
  CHECK(trace.scans[0].collects.size() == 2);
  CHECK(trace.scans[0].linearization == 3u);
}

TEST_CASE("simple solo-then-solo schedule returns 1 then 2") {
  const std::vector<std::uint32_t> schedule{1, 1, 2, 2};
  const Trace trace = run_schedule({Algorithm::Simple, 2, 1, 0}, schedule);
  REQUIRE(trace.calls.size() == 2);
  CHECK(trace.calls[0].timestamp == AnyTimestamp(SimpleTimestamp{1}));
  CHECK(trace.calls[1].timestamp == AnyTimestamp(SimpleTimestamp{2}));
}

TEST_CASE("empty schedule gives an empty trace") {
  const Trace trace = run_schedule({Algorithm::Phase, 3, 1, 0}, {});
  CHECK(trace.steps.empty());
  CHECK(trace.calls.empty());
  CHECK(trace.m == 4);
}

TEST_CASE("strict schedules reject finished processes; lenient ones skip them") {
  std::vector<std::uint32_t> schedule(7, 1);
  const Workload w{Algorithm::Phase, 1, 1, 0};
  CHECK_THROWS_AS(run_schedule(w, schedule), ScheduleError);
  const Trace trace = run_schedule(w, schedule, ScheduleMode::Lenient);
  CHECK(trace.steps.size() == 6);
  const std::vector<std::uint32_t> undeclared{3};
  CHECK_THROWS_AS(run_schedule(w, undeclared), ScheduleError);
}

TEST_CASE("next call starts at the first step after the previous call returned") {
  const Workload w{Algorithm::Phase, 1, 2, 0};
  const Trace trace = run_to_completion(w, Policy::RoundRobin, 0);
  REQUIRE(trace.calls.size() == 2);
  CHECK(trace.calls[1].invoke == *trace.calls[0].response + 1);
  CHECK(trace.calls[1].id == GetTsId{1, 2});
}

TEST_CASE("policy runs complete every call") {
  for (Policy policy : {Policy::RoundRobin, Policy::Random, Policy::AdversarialLongestScan, Policy::Sequential}) {
    const Trace trace = run_to_completion({Algorithm::Phase, 4, 1, 0}, policy, 9);
    CHECK(trace.completed_calls() == 4);
    CHECK(check_ordering(trace).pass());
  }
  const Trace simple = run_to_completion({Algorithm::Simple, 2, 1, 0}, Policy::Random, 17);
  CHECK(simple.completed_calls() == 2);
  CHECK(check_simple_algorithm(simple).pass());
}

TEST_CASE("budget of one step is exceeded") {
  try {
    run_to_completion({Algorithm::Phase, 2, 1, 0}, Policy::Random, 1, 1);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.partial().steps.size() == 1);
    CHECK(e.partial().stats.budget_exhausted);
  }
}

TEST_CASE("default step budget follows the formula") {
  CHECK(default_step_budget({Algorithm::Phase, 7, 1, 0}) == 10ull * 7 * 6 * (7 * 5));
  CHECK(default_step_budget({Algorithm::Simple, 4, 1, 0}) == 10ull * 4 * 2 * 4);
}

TEST_CASE("sequential policy runs calls solo in process order") {
  const Trace trace = run_to_completion({Algorithm::Phase, 3, 2, 0}, Policy::Sequential, 0);
  const GetTsId order[] = {{1, 1}, {2, 1}, {3, 1}, {1, 2}, {2, 2}, {3, 2}};
  REQUIRE(trace.calls.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(trace.calls[i].id == order[i]);
    if (i > 0) CHECK(trace.calls[i].invoke == *trace.calls[i - 1].response + 1);
  }
}

TEST_CASE("replay is deterministic") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Workload w{Algorithm::Phase, 5, 2, 0};
    const auto schedule = random_schedule(w, rng);
    const Trace a = run_schedule(w, schedule);
    const Trace b = run_schedule(w, schedule);
    CHECK(trace_to_json(a).dump() == trace_to_json(b).dump());
  }
  const Trace x = run_to_completion({Algorithm::Phase, 6, 1, 0}, Policy::Random, 99);
  const Trace y = run_to_completion({Algorithm::Phase, 6, 1, 0}, Policy::Random, 99);
  CHECK(trace_to_json(x).dump() == trace_to_json(y).dump());
}

TEST_CASE("every write changes the replayed register history") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const Workload w{Algorithm::Phase, 2 + static_cast<std::uint32_t>(rng() % 6), 1 + static_cast<std::uint32_t>(rng() % 2), 0};
    const Trace trace = run_to_completion(w, Policy::Random, rng());
    std::vector<RegisterValue> regs(trace.m);
    std::uint64_t transitions = 0;
    std::uint64_t writes = 0;
    for (const TraceStep& s : trace.steps) {
      if (s.op != AccessKind::Write) continue;
      ++writes;
      const RegisterValue& v = std::get<RegisterValue>(s.value);
      if (!(regs[s.reg - 1] == v)) ++transitions;
      regs[s.reg - 1] = v;
    }
    CHECK(writes == transitions);
    CHECK(writes == trace.stats.writes);
  }
}

TEST_CASE("trace invariants: dense indices and steps inside call intervals") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Workload w{Algorithm::Phase, 3 + static_cast<std::uint32_t>(rng() % 5), 2, 0};
    const Trace trace = run_to_completion(w, Policy::AdversarialLongestScan, rng());
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      const TraceStep& s = trace.steps[i];
      CHECK(s.index == i);
      const auto call = trace.find_call(s.call);
      REQUIRE(call);
      CHECK(trace.calls[*call].invoke <= i);
      CHECK(i <= *trace.calls[*call].response);
    }
    CHECK(check_well_formed(trace).pass());
  }
}

TEST_CASE("register overflow stops the run and is recorded") {
  // m = 2 for four calls: readers fall off the array once R[1] and R[2] fill.
  const Workload w{Algorithm::Phase, 4, 1, 2};
  const Trace trace = run_to_completion(w, Policy::Sequential, 0);
  REQUIRE(trace.stats.overflow_reg);
  CHECK(*trace.stats.overflow_reg == 3);
  CHECK_FALSE(check_space(trace).pass());
}

TEST_CASE("trace JSON round-trips") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Trace trace = run_to_completion({Algorithm::Phase, 4, 2, 0}, Policy::Random, seed);
    const auto doc = trace_to_json(trace);
    CHECK(doc["schema"] == "1");
    const Trace back = trace_from_json(doc);
    CHECK(trace_to_json(back).dump() == doc.dump());
  }
  const Trace simple = run_to_completion({Algorithm::Simple, 5, 1, 0}, Policy::Random, 3);
  CHECK(trace_to_json(trace_from_json(trace_to_json(simple))).dump() == trace_to_json(simple).dump());
}

TEST_CASE("trace JSON rejects malformed documents") {
  auto doc = trace_to_json(run_to_completion({Algorithm::Phase, 2, 1, 0}, Policy::Random, 1));
  auto missing = doc;
  missing.erase("steps");
  CHECK_THROWS_AS(trace_from_json(missing), TraceFormatError);
  auto bad_op = doc;
  bad_op["steps"][0]["op"] = "cas";
  CHECK_THROWS_AS(trace_from_json(bad_op), TraceFormatError);
  auto bad_value = doc;
  bad_value["steps"][0]["val"] = "<[p1],1>";
  CHECK_THROWS_AS(trace_from_json(bad_value), TraceFormatError);
}

TEST_CASE("policy names") {
  for (Policy p : {Policy::RoundRobin, Policy::Random, Policy::AdversarialLongestScan, Policy::Sequential}) {
    CHECK(parse_policy(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_policy("fifo"), std::invalid_argument);
}

TEST_CASE("derived seeds differ across runs and are reproducible") {
  CHECK(derive_seed(7, 0) == derive_seed(7, 0));
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}
