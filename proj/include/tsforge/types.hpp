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

// File: tsforge/types.hpp - Timestamps, getTS ids, register values and the
// two comparison functions.

#ifndef TSFORGE_TYPES_HPP_
#define TSFORGE_TYPES_HPP_

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsforge {

// Largest supported number of getTS calls in one execution.
inline constexpr std::uint32_t kMaxCalls = 1u << 16;

enum class Algorithm : std::uint8_t { Simple, Phase };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view text);

// Timestamp of the phase algorithm, ordered lexicographically.
struct PhaseTimestamp {
  std::uint32_t rnd = 1;
  std::uint32_t turn = 0;

  friend bool operator==(const PhaseTimestamp&, const PhaseTimestamp&) = default;
};

// Timestamp of the simple one-shot algorithm: the sum of the values read.
struct SimpleTimestamp {
  std::uint32_t value = 0;

  friend bool operator==(const SimpleTimestamp&, const SimpleTimestamp&) = default;
};

// True iff t1 is lexicographically strictly smaller than t2.
bool compare(const PhaseTimestamp& t1, const PhaseTimestamp& t2) noexcept;

bool simple_compare(SimpleTimestamp t1, SimpleTimestamp t2) noexcept;

// The k-th getTS call by process p carries id p.k.
struct GetTsId {
  std::uint32_t process = 0;
  std::uint32_t seq = 0;

  friend auto operator<=>(const GetTsId&, const GetTsId&) = default;
};

// Content of a register of the phase algorithm: either bottom or a pair
// <seq, rnd>. Values are immutable and share their payload, so copying one is
// a reference-count bump.
class RegisterValue {
 public:
  RegisterValue() = default;  // bottom
  RegisterValue(std::vector<GetTsId> seq, std::uint32_t rnd);

  static RegisterValue bottom() { return RegisterValue(); }

  bool is_bottom() const noexcept { return pair_ == nullptr; }

  // The accessors below require a non-bottom value.
  std::span<const GetTsId> seq() const;
  GetTsId last() const;
  std::uint32_t rnd() const;

  // Two values are equal iff both are bottom or both carry equal pairs.
  friend bool operator==(const RegisterValue& a, const RegisterValue& b) noexcept;

 private:
  struct Pair {
    std::vector<GetTsId> seq;
    std::uint32_t rnd;
  };
  std::shared_ptr<const Pair> pair_;
};

// Content of a register of the simple algorithm. The algorithm only ever
// stores 0, 1 or 2; the wider type lets checkers see a faulty 3.
struct SimpleRegisterValue {
  std::uint32_t value = 0;

  friend bool operator==(const SimpleRegisterValue&, const SimpleRegisterValue&) = default;
};

// Thrown by the parse_* functions on malformed canonical text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical text forms, used verbatim in traces and CLI output:
//   PhaseTimestamp "(rnd,turn)", SimpleTimestamp "<int>", GetTsId "p3.1",
//   RegisterValue "⊥" or "<[p1.1,p2.1],2>", SimpleRegisterValue "<int>".
std::string to_string(const PhaseTimestamp& ts);
std::string to_string(SimpleTimestamp ts);
std::string to_string(const GetTsId& id);
std::string to_string(const RegisterValue& value);
std::string to_string(SimpleRegisterValue value);

PhaseTimestamp parse_phase_timestamp(std::string_view text);
SimpleTimestamp parse_simple_timestamp(std::string_view text);
GetTsId parse_getts_id(std::string_view text);
RegisterValue parse_register_value(std::string_view text);
SimpleRegisterValue parse_simple_register_value(std::string_view text);

// Smallest m with m*m >= 4*calls, i.e. ceil(2*sqrt(calls)), computed exactly.
std::uint32_t phase_register_bound(std::uint32_t calls);

// ceil(n/2): registers used by the simple algorithm.
constexpr std::uint32_t simple_register_count(std::uint32_t n) { return (n + 1) / 2; }

}  // namespace tsforge

#endif  // TSFORGE_TYPES_HPP_
