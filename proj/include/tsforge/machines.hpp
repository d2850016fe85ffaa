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

// File: tsforge/machines.hpp - Step-machine encodings of simple-getTS and the
// phase getTS. Every step performs exactly one shared-register read or write;
// local computation between accesses is folded into the step that precedes it.

#ifndef TSFORGE_MACHINES_HPP_
#define TSFORGE_MACHINES_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsforge/types.hpp"

namespace tsforge {

enum class AccessKind : std::uint8_t { Read, Write };

// What the next step of a machine would do. For reads `value` is unused.
template <class Value>
struct Access {
  AccessKind kind = AccessKind::Read;
  std::uint32_t reg = 0;  // 1-based register index
  Value value{};

  friend bool operator==(const Access&, const Access&) = default;
};

// What a step did: the value seen by a read or stored by a write, tagged with
// the pseudocode line that performed the access.
template <class Value>
struct Effect {
  AccessKind kind = AccessKind::Read;
  std::uint32_t reg = 0;
  Value value{};
  std::uint16_t line = 0;

  friend bool operator==(const Effect&, const Effect&) = default;
};

// Bookkeeping a step exposes to trace recorders and monitors.
struct StepNotes {
  bool collect_completed = false;  // this read closed a collect of the scan
  bool scan_completed = false;     // ... and that collect matched the previous one
  std::optional<std::uint32_t> myrnd;  // myrnd was assigned during this step

  friend bool operator==(const StepNotes&, const StepNotes&) = default;
};

template <class Value, class Timestamp>
struct StepResult {
  Effect<Value> effect;
  std::optional<Timestamp> returned;
  StepNotes notes;

  friend bool operator==(const StepResult&, const StepResult&) = default;
};

// A machine tried to access a register beyond the provided array.
class RegisterOverflow : public std::runtime_error {
 public:
  RegisterOverflow(std::uint32_t reg, std::uint32_t size);
  std::uint32_t reg() const noexcept { return reg_; }

 private:
  std::uint32_t reg_;
};

// simple-getTS by process `pid` among `n` processes. The increment of the own
// register is a read step followed by a write of (value read + 1); the sum
// accumulates the value read for foreign registers and the value written for
// the own register.
//
// Line numbers used in traces:
//   4  read or write of the own register (the increment)
//   5  read of a foreign register (sum := sum + R[i])
class SimpleMachine {
 public:
  enum class Pc : std::uint8_t { Read, IncrementWrite, Done };

  SimpleMachine(std::uint32_t pid, std::uint32_t n);

  bool enabled() const noexcept { return pc_ != Pc::Done; }
  Access<SimpleRegisterValue> next_access() const;
  StepResult<SimpleRegisterValue, SimpleTimestamp> step(
      std::span<const SimpleRegisterValue> registers);

  std::uint32_t pid() const noexcept { return pid_; }
  std::uint32_t register_count() const noexcept { return registers_; }
  std::uint32_t own_register() const noexcept { return own_; }
  std::uint32_t index() const noexcept { return i_; }
  std::uint32_t sum() const noexcept { return sum_; }
  Pc pc() const noexcept { return pc_; }

  // Appends the state that determines future behaviour to a dedup key.
  void append_key(std::string& key) const;

  friend bool operator==(const SimpleMachine&, const SimpleMachine&) = default;

 private:
  std::uint32_t pid_;
  std::uint32_t registers_;
  std::uint32_t own_;
  std::uint32_t i_ = 1;
  std::uint32_t sum_ = 0;
  Pc pc_ = Pc::Read;
  std::optional<std::uint32_t> pending_read_;
};

// getTS(ID) of the phase algorithm over m registers.
//
// Program locations and the pseudocode lines they execute:
//   WhileRead        1-3  read R[j]; on bottom run line 4 and enter the for-loop
//   ForCheckSentinel 6    read R[myrnd+1]; non-bottom returns (myrnd+1, 0) (line 12)
//   ForCheckValid    7    read R[j], compare r[myrnd].seq[j] with last(R[j].seq)
//   WriteTurn        8    write <(ID), myrnd> to R[j], return (myrnd, j) (line 9)
//   ReadRnd          10   read R[j].rnd
//   WriteOverwrite   11   write <(ID), myrnd> to R[j]
//   Scan             13   one read of the double-collect scan over R[1..m];
//                         the read that completes the scan also runs line 14
//                         and may return (myrnd+1, 0) (line 16)
//   WriteNewRound    15   write the new round to R[myrnd+1], return (line 16)
//   Returned
class PhaseMachine {
 public:
  enum class Pc : std::uint8_t {
    WhileRead,
    ForCheckSentinel,
    ForCheckValid,
    WriteTurn,
    ReadRnd,
    WriteOverwrite,
    Scan,
    WriteNewRound,
    Returned,
  };

  PhaseMachine(std::uint32_t pid, std::uint32_t seq, std::uint32_t m);

  bool enabled() const noexcept { return pc_ != Pc::Returned; }
  Access<RegisterValue> next_access() const;
  StepResult<RegisterValue, PhaseTimestamp> step(std::span<const RegisterValue> registers);

  GetTsId id() const noexcept { return id_; }
  std::uint32_t pid() const noexcept { return id_.process; }
  std::uint32_t m() const noexcept { return m_; }
  Pc pc() const noexcept { return pc_; }
  std::uint32_t j() const noexcept { return j_; }
  std::optional<std::uint32_t> myrnd() const noexcept { return myrnd_; }
  std::span<const RegisterValue> local_view() const noexcept { return r_; }
  std::uint32_t collects_completed() const noexcept { return collects_; }

  void append_key(std::string& key) const;

  friend bool operator==(const PhaseMachine&, const PhaseMachine&) = default;

 private:
  const RegisterValue& read(std::span<const RegisterValue> registers, std::uint32_t reg) const;
  void enter_for_loop();
  void advance_for_loop();
  RegisterValue own_pair() const;
  RegisterValue new_round_value() const;

  GetTsId id_;
  std::uint32_t m_;
  Pc pc_ = Pc::WhileRead;
  std::uint32_t j_ = 1;
  std::optional<std::uint32_t> myrnd_;
  std::vector<RegisterValue> r_;  // r[1..m] stored at r_[0..m-1]
  // Double-collect state.
  std::uint32_t collects_ = 0;
  std::uint32_t pos_ = 1;
  std::vector<RegisterValue> prev_view_;
  std::vector<RegisterValue> cur_view_;
};

// Pseudocode line number for a program location.
std::uint16_t line_of(PhaseMachine::Pc pc);

std::string_view to_string(PhaseMachine::Pc pc);

void append_key(std::string& key, const RegisterValue& value);
void append_key(std::string& key, SimpleRegisterValue value);

}  // namespace tsforge

#endif  // TSFORGE_MACHINES_HPP_
