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

#include "tsforge/workload.hpp"

#include <stdexcept>
#include <string>

namespace tsforge {

std::uint32_t Workload::registers() const noexcept {
  if (m != 0) return m;
  return algo == Algorithm::Simple ? simple_register_count(n)
                                   : phase_register_bound(total_calls());
}

void Workload::validate() const {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (calls_per_process < 1) throw std::invalid_argument("calls-per-process must be at least 1");
  if (static_cast<std::uint64_t>(n) * calls_per_process > kMaxCalls) {
    throw std::invalid_argument("M = n * calls-per-process exceeds " + std::to_string(kMaxCalls));
  }
  if (algo == Algorithm::Simple) {
    if (calls_per_process != 1) {
      throw std::invalid_argument("the simple algorithm is one-shot: calls-per-process must be 1");
    }
    if (m != 0 && m != simple_register_count(n)) {
      throw std::invalid_argument("the simple algorithm uses exactly ceil(n/2) registers");
    }
  } else if (registers() < 2) {
    throw std::invalid_argument("the phase algorithm needs m >= 2");
  }
}

}  // namespace tsforge
