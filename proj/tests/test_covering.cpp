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

#include "doctest.h"
#include "tsforge/covering.hpp"
#include "tsforge/simulator.hpp"

using namespace tsforge;

namespace {

Configuration<PhaseAlgo> random_config(const Workload& w, std::mt19937_64& rng) {
  Configuration<PhaseAlgo> config(w);
  const std::uint64_t steps = rng() % 60;
  for (std::uint64_t i = 0; i < steps; ++i) {
    const auto pids = config.enabled_pids();
    if (pids.empty()) break;
    config.step(pids[rng() % pids.size()]);
  }
  return config;
}

}  // namespace

TEST_CASE("covers follows the next access") {
  const Workload w{Algorithm::Phase, 3, 1, 0};
  Configuration<PhaseAlgo> config(w);
  CHECK_FALSE(covers(config, 1));
  while (!covers(config, 1)) config.step(1);  // p1 solo through its scan, poised at line 15
  CHECK(covers(config, 1) == 1u);
  CHECK(config.machine(1)->pc() == PhaseMachine::Pc::WriteNewRound);
  config.step(1);
  CHECK_FALSE(covers(config, 1));  // returned
  // p2 then p3 solo: p3 pauses before its line 8 write to R[1].
  while (config.in_call(2) || config.calls_started(2) == 0) config.step(2);
  std::optional<std::uint32_t> reg;
  while (!(reg = covers(config, 3))) config.step(3);
  CHECK(*reg == 1);
  CHECK(config.machine(3)->pc() == PhaseMachine::Pc::WriteTurn);
}

TEST_CASE("signature examples") {
  const Workload w{Algorithm::Phase, 3, 1, 0};
  Configuration<PhaseAlgo> config(w);
  CHECK(signature(config) == Signature{0, 0, 0, 0});
  // p1 and p2 both finish their scans over empty registers: both cover R[1].
  while (!covers(config, 1)) config.step(1);
  while (!covers(config, 2)) config.step(2);
  CHECK(signature(config) == Signature{2, 0, 0, 0});
  CHECK(ordered_signature(Signature{0, 2, 1}) == Signature{2, 1, 0});
}

TEST_CASE("3k predicate examples") {
  CHECK(is_3k_signature({0, 0, 0}, 0));
  CHECK(is_3k_signature({3, 1}, 4));
  CHECK_FALSE(is_3k_signature({4, 0}, 4));
  CHECK_FALSE(is_3k_signature({1, 1}, 3));
}

TEST_CASE("constrained and full predicate examples") {
  CHECK(is_l_constrained_signature({2, 1, 0}, 3));
  CHECK_FALSE(is_l_constrained_signature({3, 0, 0}, 3));
  CHECK(is_full_signature({2, 2, 0}, 2, 2));
  CHECK_FALSE(is_full_signature({2, 1, 0}, 2, 2));
  CHECK_THROWS_AS(is_l_constrained_signature({0, 0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(is_full_signature({0, 0}, 0, 1), std::invalid_argument);
}

TEST_CASE("3k identity on random signatures") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5000; ++trial) {
    Signature sig(1 + rng() % 6);
    for (auto& c : sig) c = static_cast<std::uint32_t>(rng() % 6);
    std::uint64_t total = 0;
    for (auto c : sig) total += c;
    CHECK(is_3k_signature(sig, total) == (*std::max_element(sig.begin(), sig.end()) <= 3));
  }
}

TEST_CASE("properties over random reachable configurations") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const Workload w{Algorithm::Phase, 2 + static_cast<std::uint32_t>(rng() % 6), 1, 0};
    const auto config = random_config(w, rng);
    const Signature sig = signature(config);
    Signature ordered = ordered_signature(config);
    CHECK(std::is_sorted(ordered.begin(), ordered.end(), std::greater<>()));
    Signature a = sig;
    std::sort(a.begin(), a.end());
    std::sort(ordered.begin(), ordered.end());
    CHECK(a == ordered);
    for (std::uint32_t j = 1; j <= w.registers(); ++j) {
      for (std::uint32_t k = 1; k <= 3; ++k) {
        if (!is_full(config, j, k)) continue;
        const auto hits = std::count_if(sig.begin(), sig.end(), [&](std::uint32_t c) { return c >= k; });
        CHECK(static_cast<std::uint32_t>(hits) >= j);
      }
    }
  }
}

TEST_CASE("block write examples") {
  const Workload w{Algorithm::Phase, 2, 1, 0};
  Configuration<PhaseAlgo> config(w);
  CHECK(block_write(config, {}) == config);
  while (!covers(config, 2)) config.step(2);
  while (!covers(config, 1)) config.step(1);
  const auto after = block_write(config, {2, 1});
  CHECK(after.registers()[0] == RegisterValue({{2, 1}}, 1));
  Configuration<PhaseAlgo> fresh(w);
  CHECK_THROWS_AS(block_write(fresh, {1}), NotCovering);
  // No step is taken when any listed process fails to cover.
  Configuration<PhaseAlgo> partial = config;
  partial.step(2);
  CHECK_THROWS_AS(block_write(partial, {1, 2}), NotCovering);
}

TEST_CASE("block write leaves bystanders untouched") {
  std::mt19937_64 rng(3);
  int exercised = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Workload w{Algorithm::Phase, 3 + static_cast<std::uint32_t>(rng() % 4), 1, 0};
    const auto config = random_config(w, rng);
    std::vector<std::uint32_t> writers;
    std::vector<std::uint32_t> others;
    for (std::uint32_t pid = 1; pid <= w.n; ++pid) (covers(config, pid) ? writers : others).push_back(pid);
    if (writers.empty()) continue;
    ++exercised;
    const auto after = block_write(config, writers);
    for (std::uint32_t pid : others) {
      const auto* before_m = config.machine(pid);
      const auto* after_m = after.machine(pid);
      CHECK((before_m == nullptr) == (after_m == nullptr));
      if (before_m) CHECK(*before_m == *after_m);
    }
    for (std::uint32_t i = 0; i < w.registers(); ++i) {
      const bool written = std::any_of(writers.begin(), writers.end(),
                                       [&](std::uint32_t pid) { return *covers(config, pid) == i + 1; });
      if (!written) CHECK(after.registers()[i] == config.registers()[i]);
    }
  }
  CHECK(exercised > 0);
}

TEST_CASE("covering search examples") {
  const auto one = search_max_covering({Algorithm::Phase, 1, 1, 0});
  CHECK(one.max_k == 1);
  const auto two = search_max_covering({Algorithm::Phase, 2, 1, 0});
  CHECK(two.max_k >= 2);
  const auto tiny = search_max_covering({Algorithm::Phase, 2, 1, 0}, {1});
  CHECK(tiny.max_k == 0);
  CHECK(tiny.budget_exhausted);
}

TEST_CASE("covering witnesses replay to their signature") {
  for (std::uint32_t n = 1; n <= 3; ++n) {
    const Workload w{Algorithm::Phase, n, 1, 0};
    const auto report = search_max_covering(w);
    Configuration<PhaseAlgo> config(w);
    for (std::uint32_t pid : report.witness_schedule) config.step(pid);
    CHECK(signature(config) == report.signature);
    CHECK(is_3k_configuration(config, report.max_k));
    const auto covered = std::count_if(report.signature.begin(), report.signature.end(), [](auto c) { return c > 0; });
    CHECK(static_cast<std::uint32_t>(covered) == report.covered_registers);
    CHECK(report.covered_registers * 3 >= report.max_k);
  }
}
