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

#ifndef TSFORGE_WORKLOAD_HPP_
#define TSFORGE_WORKLOAD_HPP_

#include <cstdint>

#include "tsforge/types.hpp"

namespace tsforge {

// What to run: n processes, each invoking getTS calls_per_process times,
// over an m-register array. M = n * calls_per_process.
struct Workload {
  Algorithm algo = Algorithm::Phase;
  std::uint32_t n = 1;
  std::uint32_t calls_per_process = 1;
  std::uint32_t m = 0;  // 0 selects ceil(2*sqrt(M)) or ceil(n/2)

  std::uint32_t total_calls() const noexcept { return n * calls_per_process; }
  std::uint32_t registers() const noexcept;

  // Dense index of call p.k in 0..M-1.
  std::uint32_t call_index(GetTsId id) const noexcept {
    return (id.process - 1) * calls_per_process + (id.seq - 1);
  }
  GetTsId call_id(std::uint32_t index) const noexcept {
    return {index / calls_per_process + 1, index % calls_per_process + 1};
  }

  // Throws std::invalid_argument when the workload is unusable.
  void validate() const;

  friend bool operator==(const Workload&, const Workload&) = default;
};

}  // namespace tsforge

#endif  // TSFORGE_WORKLOAD_HPP_
