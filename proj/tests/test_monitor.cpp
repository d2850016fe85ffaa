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
#include <set>
#include <string>

#include "doctest.h"
#include "tsforge/monitor.hpp"
#include "tsforge/simulator.hpp"
#include "tsforge/verify.hpp"

using namespace tsforge;

namespace {

struct OnlineRun {
  std::vector<std::uint32_t> schedule;
  std::set<std::string> checkers;  // checkers the monitor flagged
  std::uint32_t phase = 0;
  std::uint32_t invalidations = 0;
};

template <class Algo>
OnlineRun drive(const Workload& w, std::mt19937_64& rng) {
  Configuration<Algo> config(w);
  Monitor<Algo> monitor(w);
  OnlineRun run;
  std::uint64_t step = 0;
  for (auto pids = config.enabled_pids(); !pids.empty(); pids = config.enabled_pids(), ++step) {
    const std::uint32_t pid = pids[rng() % pids.size()];
    run.schedule.push_back(pid);
    const auto access = config.next_access(pid);
    typename Algo::Value old_value{};
    if (access->reg <= config.registers().size()) old_value = config.registers()[access->reg - 1];
    std::vector<Violation> found;
    bool alive = true;
    try {
      const auto event = config.step(pid);
      found = monitor.observe(event, old_value, config.registers(), step);
    } catch (const RegisterOverflow& e) {
      found = monitor.overflow(e.reg(), step);
      alive = false;
    }
    for (const Violation& v : found) run.checkers.insert(v.checker);
    if (!alive) break;
  }
  run.phase = monitor.current_phase();
  run.invalidations = monitor.total_invalidations();
  return run;
}

std::set<std::string> offline(const Trace& trace) {
  std::set<std::string> out;
  for (const Verdict& v : run_all_checkers(trace)) {
    if (!v.pass()) out.insert(v.checker);
  }
  return out;
}

}  // namespace

TEST_CASE("monitor rejects oversized workloads") {
  CHECK_THROWS_AS(Monitor<PhaseAlgo>(Workload{Algorithm::Phase, 65, 1, 0}), std::invalid_argument);
  CHECK_NOTHROW(Monitor<PhaseAlgo>(Workload{Algorithm::Phase, 64, 1, 0}));
}

TEST_CASE("monitor is silent on random runs and tracks the phase partition") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 400; ++trial) {
    const Workload w{Algorithm::Phase, 1 + static_cast<std::uint32_t>(rng() % 10), 1 + static_cast<std::uint32_t>(rng() % 3), 0};
    const OnlineRun run = drive<PhaseAlgo>(w, rng);
    INFO("n=" << w.n << " k=" << w.calls_per_process);
    CHECK(run.checkers.empty());
    const Trace trace = run_schedule(w, run.schedule);
    CHECK(offline(trace).empty());
    const PhasePartition phases = compute_phases(trace);
    CHECK(run.phase == phases.phases.back().index);
    CHECK(run.invalidations == phases.total_invalidations());
  }
}

TEST_CASE("monitor is silent on random simple runs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Workload w{Algorithm::Simple, 1 + static_cast<std::uint32_t>(rng() % 9), 1, 0};
    const OnlineRun run = drive<SimpleAlgo>(w, rng);
    CHECK(run.checkers.empty());
  }
}

TEST_CASE("monitor and post-hoc checkers agree on overridden register counts") {
  std::mt19937_64 rng(99);
  int flagged = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 5);
    const std::uint32_t bound = phase_register_bound(n);
    const std::uint32_t m = trial % 2 ? bound + 1 + static_cast<std::uint32_t>(rng() % 3) : 2 + static_cast<std::uint32_t>(rng() % (bound - 1));
    const Workload w{Algorithm::Phase, n, 1, m};
    const OnlineRun run = drive<PhaseAlgo>(w, rng);
    const Trace trace = run_schedule(w, run.schedule, ScheduleMode::Strict);
    auto post = offline(trace);
    post.erase(kWellFormed);
    INFO("n=" << n << " m=" << m);
    CHECK(run.checkers.empty() == post.empty());
    CHECK(run.checkers == post);
    if (!post.empty()) ++flagged;
  }
  CHECK(flagged > 0);
}

TEST_CASE("monitor keys distinguish precedence") {
  // p1 solo then p2, against p2's first read before p1 returns.
  const Workload w{Algorithm::Phase, 2, 1, 0};
  auto key_after = [&](std::vector<std::uint32_t> schedule) {
    Configuration<PhaseAlgo> config(w);
    Monitor<PhaseAlgo> monitor(w);
    std::uint64_t step = 0;
    for (std::uint32_t pid : schedule) {
      const auto access = config.next_access(pid);
      const RegisterValue old_value = config.registers()[access->reg - 1];
      const auto event = config.step(pid);
      monitor.observe(event, old_value, config.registers(), step++);
    }
    std::string key;
    monitor.append_key(key);
    return key;
  };
  std::vector<std::uint32_t> a(8, 1);
  CHECK(key_after(a) == key_after(a));
  a.push_back(2);
  std::vector<std::uint32_t> b(7, 1);
  b.push_back(2);
  b.push_back(1);
  CHECK(key_after(a) != key_after(b));
}
