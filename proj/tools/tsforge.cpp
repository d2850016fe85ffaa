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

// tsforge - batch front-end for running, stressing, exploring and covering
// timestamp-object workloads.
//
// Exit status: 0 pass, 1 property violation, 2 usage error, 3 exploration or
// search budget exhausted without violation. A policy run that exhausts its
// step budget is a violation.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsforge/covering.hpp"
#include "tsforge/explore.hpp"
#include "tsforge/simulator.hpp"
#include "tsforge/trace_json.hpp"
#include "tsforge/verify.hpp"

namespace {

using nlohmann::ordered_json;
using namespace tsforge;

constexpr const char* kVersion = "1.0.0";

enum Exit : int { kPass = 0, kViolation = 1, kUsage = 2, kBudget = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WorkloadFlags {
  std::string algo = "phase";
  std::uint32_t n = 0;
  std::uint32_t calls_per_process = 1;
  std::uint32_t m = 0;

  Workload build() const {
    Workload w;
    try {
      w.algo = parse_algorithm(algo);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    w.n = n;
    w.calls_per_process = calls_per_process;
    w.m = m;
    try {
      w.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return w;
  }
};

void add_workload_flags(CLI::App* cmd, WorkloadFlags& flags) {
  cmd->add_option("--algo", flags.algo, "phase or simple")->check(CLI::IsMember({"phase", "simple"}));
  cmd->add_option("--n", flags.n, "number of processes")->required();
  cmd->add_option("--calls-per-process", flags.calls_per_process, "getTS calls per process");
  cmd->add_option("--m", flags.m, "register count (default ceil(2 sqrt M), or ceil(n/2) for simple)");
}

// Flag, else TSFORGE_BUDGET, else the default.
std::uint64_t resolve_budget(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TSFORGE_BUDGET"); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end) throw UsageError("TSFORGE_BUDGET is not an integer: " + std::string(env));
    return value;
  }
  return fallback;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_meta(ordered_json& doc, bool no_meta, const char* command) {
  if (no_meta) return;
  doc["meta"] = {{"tool", "tsforge"}, {"version", kVersion}, {"command", command}, {"generated_at", utc_now()}};
}

std::vector<std::uint32_t> parse_schedule(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    std::uint32_t pid = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), pid);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || pid == 0) {
      throw UsageError("bad schedule entry '" + item + "'");
    }
    out.push_back(pid);
    pos = comma + 1;
  }
  return out;
}

ordered_json verdicts_json(const std::vector<Verdict>& verdicts) {
  ordered_json list = ordered_json::array();
  for (const Verdict& v : verdicts) list.push_back(verdict_to_json(v));
  return list;
}

void print_violations(const std::vector<Verdict>& verdicts) {
  for (const Verdict& v : verdicts) {
    for (const Violation& x : v.violations) {
      std::cerr << "violation: " << x.checker << "/" << x.kind;
      if (x.step) std::cerr << " at step " << *x.step;
      std::cerr << ": " << x.detail << "\n";
    }
  }
}

// ---------------------------------------------------------------------------

struct RunFlags {
  WorkloadFlags workload;
  std::string schedule;
  std::string policy = "round-robin";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  bool lenient = false;
  bool no_meta = false;
};

int cmd_run(const RunFlags& flags) {
  const Workload w = flags.workload.build();
  Trace trace;
  bool budget_hit = false;
  if (!flags.schedule.empty() && flags.schedule != "sequential") {
    const auto schedule = parse_schedule(flags.schedule);
    try {
      trace = run_schedule(w, schedule, flags.lenient ? ScheduleMode::Lenient : ScheduleMode::Strict);
    } catch (const ScheduleError& e) {
      throw UsageError(e.what());
    }
  } else {
    Policy policy;
    try {
      policy = flags.schedule == "sequential" ? Policy::Sequential : parse_policy(flags.policy);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    try {
      trace = run_to_completion(w, policy, flags.seed, resolve_budget(flags.budget, default_step_budget(w)));
    } catch (const BudgetExceeded& e) {
      std::cerr << e.what() << "\n";
      trace = e.partial();
      budget_hit = true;
    }
  }
  const auto verdicts = run_all_checkers(trace);
  ordered_json doc = trace_to_json(trace);
  doc["verdicts"] = verdicts_json(verdicts);
  add_meta(doc, flags.no_meta, "run");
  std::cout << doc.dump(2) << "\n";
  print_violations(verdicts);
  // An exhausted step budget means some call did not finish: a wait-freedom failure.
  return all_pass(verdicts) && !budget_hit ? kPass : kViolation;
}

// ---------------------------------------------------------------------------

struct ExploreFlags {
  WorkloadFlags workload;
  std::string mode = "dedup-graph";
  std::optional<std::uint64_t> budget;
  bool no_meta = false;
};

int cmd_explore(const ExploreFlags& flags) {
  const Workload w = flags.workload.build();
  ExploreOptions options;
  options.mode = parse_explore_mode(flags.mode);
  options.budget = resolve_budget(flags.budget, kDefaultExploreBudget);
  if (options.mode == ExploreMode::DedupGraph && w.total_calls() > 64) {
    throw UsageError("dedup-graph exploration supports M <= 64");
  }
  const ExplorationReport report = explore(w, options);
  ordered_json doc = report_to_json(report);
  add_meta(doc, flags.no_meta, "explore");
  std::cout << doc.dump(2) << "\n";
  std::cerr << "explored " << report.nodes << " configurations, " << report.paths << " paths, "
            << report.violation_count << " violations" << (report.budget_exhausted ? " (budget exhausted)" : "")
            << "\n";
  if (!report.pass()) return kViolation;
  return report.budget_exhausted ? kBudget : kPass;
}

// ---------------------------------------------------------------------------

struct StressFlags {
  WorkloadFlags workload;
  std::uint64_t runs = 1000;
  std::uint64_t seed = 0;
  std::string policy = "random";
  std::optional<std::uint64_t> budget;
  bool no_meta = false;
};

const char* const kCsvCheckers[] = {kWellFormed, kOrdering, kRegisterClaims, kSpace,
                                    kWaitFreedom, kInvalidation, kSimpleAlgorithm};

int cmd_stress(const StressFlags& flags) {
  const Workload w = flags.workload.build();
  Policy policy;
  try {
    policy = parse_policy(flags.policy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::uint64_t budget = resolve_budget(flags.budget, default_step_budget(w));

  if (!flags.no_meta) {
    std::cout << "# tsforge " << kVersion << " stress generated_at=" << utc_now() << "\n";
  }
  std::cout << "run,seed,steps,max_reg_accessed,max_reg_written,phases,invalidation_writes";
  for (const char* name : kCsvCheckers) std::cout << "," << name;
  std::cout << "\n";

  std::uint64_t failed = 0;
  std::uint64_t budget_runs = 0;
  std::uint32_t worst_accessed = 0;
  std::uint32_t worst_written = 0;
  for (std::uint64_t run = 0; run < flags.runs; ++run) {
    const std::uint64_t seed = derive_seed(flags.seed, run);
    Trace trace;
    try {
      trace = run_to_completion(w, policy, seed, budget);
    } catch (const BudgetExceeded& e) {
      trace = e.partial();
      ++budget_runs;
    }
    const auto verdicts = run_all_checkers(trace);
    std::uint32_t phases = 0;
    std::uint32_t invalidations = 0;
    if (w.algo == Algorithm::Phase) {
      try {
        const PhasePartition partition = compute_phases(trace);
        phases = partition.completed_count();
        invalidations = partition.total_invalidations();
      } catch (const MalformedTrace&) {
      }
    }
    worst_accessed = std::max(worst_accessed, trace.stats.max_reg_accessed);
    worst_written = std::max(worst_written, trace.stats.max_reg_written);
    std::cout << run << "," << seed << "," << trace.steps.size() << "," << trace.stats.max_reg_accessed
              << "," << trace.stats.max_reg_written << "," << phases << "," << invalidations;
    for (const char* name : kCsvCheckers) {
      const char* cell = "na";
      for (const Verdict& v : verdicts) {
        if (v.checker == name) cell = v.pass() ? "pass" : "fail";
      }
      std::cout << "," << cell;
    }
    std::cout << "\n";
    if (!all_pass(verdicts) || trace.stats.budget_exhausted) {
      ++failed;
      std::cerr << "run " << run << " (seed " << seed << ") failed\n";
      print_violations(verdicts);
    }
  }
  std::cerr << flags.runs << " runs, " << failed << " failed; max register accessed " << worst_accessed
            << ", max written " << worst_written << "\n";
  if (budget_runs > 0) std::cerr << budget_runs << " runs exhausted their step budget\n";
  return failed > 0 ? kViolation : kPass;
}

// ---------------------------------------------------------------------------

struct CoverFlags {
  WorkloadFlags workload;
  std::optional<std::uint64_t> budget;
  bool quiescent_only = false;
  bool no_meta = false;
};

int cmd_cover(const CoverFlags& flags) {
  const Workload w = flags.workload.build();
  CoveringOptions options;
  options.budget = resolve_budget(flags.budget, options.budget);
  options.quiescent_only = flags.quiescent_only;
  const CoveringReport report = search_max_covering(w, options);
  ordered_json doc = covering_to_json(report);
  add_meta(doc, flags.no_meta, "cover");
  std::cout << doc.dump(2) << "\n";
  return report.budget_exhausted ? kBudget : kPass;
}

// ---------------------------------------------------------------------------

struct CheckFlags {
  std::string path;
  bool no_meta = false;
};

int cmd_check(const CheckFlags& flags) {
  Trace trace;
  try {
    trace = load_trace_file(flags.path);
  } catch (const TraceFormatError& e) {
    throw UsageError(e.what());
  }
  const auto verdicts = run_all_checkers(trace);
  ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["trace"] = flags.path;
  doc["pass"] = all_pass(verdicts);
  doc["verdicts"] = verdicts_json(verdicts);
  add_meta(doc, flags.no_meta, "check");
  std::cout << doc.dump(2) << "\n";
  print_violations(verdicts);
  return all_pass(verdicts) ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsforge: simulate, verify and explore wait-free timestamp algorithms"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "execute one schedule and emit its trace");
  add_workload_flags(run_cmd, run.workload);
  run_cmd->add_option("--schedule", run.schedule, "comma-separated pids, or 'sequential'");
  run_cmd->add_option("--policy", run.policy, "round-robin, random, adversarial-longest-scan, sequential");
  run_cmd->add_option("--seed", run.seed);
  run_cmd->add_option("--budget", run.budget, "step budget");
  run_cmd->add_flag("--lenient", run.lenient, "skip schedule entries of finished processes");
  run_cmd->add_flag("--no-meta", run.no_meta, "omit the meta header");

  ExploreFlags ex;
  auto* explore_cmd = app.add_subcommand("explore", "explore every interleaving");
  add_workload_flags(explore_cmd, ex.workload);
  explore_cmd->add_option("--mode", ex.mode)->check(CLI::IsMember({"full-paths", "dedup-graph"}));
  explore_cmd->add_option("--budget", ex.budget, "node (dedup-graph) or path (full-paths) budget");
  explore_cmd->add_flag("--no-meta", ex.no_meta, "omit the meta header");

  StressFlags st;
  auto* stress_cmd = app.add_subcommand("stress", "check many random schedules, CSV per run");
  add_workload_flags(stress_cmd, st.workload);
  stress_cmd->add_option("--runs", st.runs);
  stress_cmd->add_option("--seed", st.seed);
  stress_cmd->add_option("--policy", st.policy);
  stress_cmd->add_option("--budget", st.budget, "step budget per run");
  stress_cmd->add_flag("--no-meta", st.no_meta, "omit the meta header line");

  CoverFlags cv;
  auto* cover_cmd = app.add_subcommand("cover", "search for high-covering configurations");
  add_workload_flags(cover_cmd, cv.workload);
  cover_cmd->add_option("--budget", cv.budget, "configuration budget");
  cover_cmd->add_flag("--quiescent-only", cv.quiescent_only, "score quiescent configurations only");
  cover_cmd->add_flag("--no-meta", cv.no_meta, "omit the meta header");

  CheckFlags ck;
  auto* check_cmd = app.add_subcommand("check", "run every checker on a trace file");
  check_cmd->add_option("trace", ck.path, "trace JSON")->required();
  check_cmd->add_flag("--no-meta", ck.no_meta, "omit the meta header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*explore_cmd) return cmd_explore(ex);
    if (*stress_cmd) return cmd_stress(st);
    if (*cover_cmd) return cmd_cover(cv);
    if (*check_cmd) return cmd_check(ck);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
