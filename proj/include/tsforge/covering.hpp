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

// File: tsforge/covering.hpp - Covering vocabulary over configurations of the
// implemented algorithms, and a search for reachable configurations with many
// covered registers. Results describe these machines only; they say nothing
// about lower bounds for other algorithms.

#ifndef TSFORGE_COVERING_HPP_
#define TSFORGE_COVERING_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsforge/configuration.hpp"

namespace tsforge {

// c_i = number of processes covering register i (index i-1).
using Signature = std::vector<std::uint32_t>;

// Register pid's next step writes, if that step is a write.
template <class Algo>
std::optional<std::uint32_t> covers(const Configuration<Algo>& config, std::uint32_t pid) {
  const auto access = config.next_access(pid);
  if (!access || access->kind != AccessKind::Write) return std::nullopt;
  return access->reg;
}

template <class Algo>
Signature signature(const Configuration<Algo>& config) {
  Signature sig(config.registers().size(), 0);
  for (std::uint32_t pid = 1; pid <= config.n(); ++pid) {
    if (const auto reg = covers(config, pid); reg && *reg >= 1 && *reg <= sig.size()) ++sig[*reg - 1];
  }
  return sig;
}

inline Signature ordered_signature(Signature sig) {
  std::sort(sig.begin(), sig.end(), std::greater<>());
  return sig;
}

template <class Algo>
Signature ordered_signature(const Configuration<Algo>& config) {
  return ordered_signature(signature(config));
}

// Sum of c_i equals k and every c_i <= 3.
bool is_3k_signature(const Signature& sig, std::uint64_t k);

template <class Algo>
bool is_3k_configuration(const Configuration<Algo>& config, std::uint64_t k) {
  return is_3k_signature(signature(config), k);
}

// s_c <= l - c for 1 <= c <= l, where s is the ordered signature. Requires
// 1 <= l <= m.
bool is_l_constrained_signature(const Signature& ordered, std::uint32_t l);

template <class Algo>
bool is_l_constrained(const Configuration<Algo>& config, std::uint32_t l) {
  return is_l_constrained_signature(ordered_signature(config), l);
}

// At least j registers are each covered by at least k processes. Requires
// 1 <= j <= m.
bool is_full_signature(const Signature& sig, std::uint32_t j, std::uint32_t k);

template <class Algo>
bool is_full(const Configuration<Algo>& config, std::uint32_t j, std::uint32_t k) {
  return is_full_signature(signature(config), j, k);
}

// Every initiated call has returned.
template <class Algo>
bool is_quiescent(const Configuration<Algo>& config) {
  return config.quiescent();
}

class NotCovering : public std::invalid_argument {
 public:
  explicit NotCovering(std::uint32_t pid)
      : std::invalid_argument("process " + std::to_string(pid) + " does not cover a register"),
        pid_(pid) {}
  std::uint32_t pid() const noexcept { return pid_; }

 private:
  std::uint32_t pid_;
};

// One step by each listed process in ascending ID order. Throws NotCovering
// before taking any step when a listed process does not cover a register.
template <class Algo>
Configuration<Algo> block_write(Configuration<Algo> config, std::vector<std::uint32_t> pids) {
  std::sort(pids.begin(), pids.end());
  pids.erase(std::unique(pids.begin(), pids.end()), pids.end());
  for (std::uint32_t pid : pids) {
    if (!covers(config, pid)) throw NotCovering(pid);
  }
  for (std::uint32_t pid : pids) config.step(pid);
  return config;
}

struct CoveringOptions {
  std::uint64_t budget = 10'000'000;  // configurations visited
  bool quiescent_only = false;        // score only quiescent configurations
};

struct CoveringReport {
  Workload workload;
  std::uint64_t max_k = 0;
  std::vector<std::uint32_t> witness_schedule;
  Signature signature;
  std::uint32_t covered_registers = 0;
  std::uint64_t nodes_visited = 0;
  bool budget_exhausted = false;
};

// Breadth-first over distinct reachable configurations, keeping the largest k
// for which a (3,k)-configuration was seen and the shortest schedule reaching
// it. Replaying the witness through run_schedule reaches that configuration.
CoveringReport search_max_covering(const Workload& workload, const CoveringOptions& options = {});

nlohmann::ordered_json covering_to_json(const CoveringReport& report);

}  // namespace tsforge

#endif  // TSFORGE_COVERING_HPP_
