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

#include "tsforge/machines.hpp"

#include "tsforge/detail/key_util.hpp"

namespace tsforge {

RegisterOverflow::RegisterOverflow(std::uint32_t reg, std::uint32_t size)
    : std::runtime_error("access to register " + std::to_string(reg) + " beyond the " +
                         std::to_string(size) + " provided"),
      reg_(reg) {}

void append_key(std::string& key, const RegisterValue& value) {
  if (value.is_bottom()) {
    detail::put_varint(key, 0);
    return;
  }
  detail::put_varint(key, value.rnd());
  detail::put_varint(key, value.seq().size());
  for (const GetTsId& id : value.seq()) {
    detail::put_varint(key, id.process);
    detail::put_varint(key, id.seq);
  }
}

void append_key(std::string& key, SimpleRegisterValue value) {
  detail::put_varint(key, value.value);
}

// ---------------------------------------------------------------------------
// SimpleMachine

SimpleMachine::SimpleMachine(std::uint32_t pid, std::uint32_t n)
    : pid_(pid), registers_(simple_register_count(n)), own_((pid + 1) / 2) {
  if (pid < 1 || pid > n) {
    throw std::invalid_argument("simple machine: pid " + std::to_string(pid) +
                                " outside 1.." + std::to_string(n));
  }
}

Access<SimpleRegisterValue> SimpleMachine::next_access() const {
  switch (pc_) {
    case Pc::Read:
      return {AccessKind::Read, i_, {}};
    case Pc::IncrementWrite:
      return {AccessKind::Write, own_, SimpleRegisterValue{*pending_read_ + 1}};
    case Pc::Done:
      break;
  }
  throw std::logic_error("next_access on a returned simple machine");
}

StepResult<SimpleRegisterValue, SimpleTimestamp> SimpleMachine::step(
    std::span<const SimpleRegisterValue> registers) {
  StepResult<SimpleRegisterValue, SimpleTimestamp> out;
  switch (pc_) {
    case Pc::Done:
      throw std::logic_error("step on a returned simple machine");
    case Pc::Read: {
      if (i_ > registers.size()) throw RegisterOverflow(i_, registers.size());
      const SimpleRegisterValue seen = registers[i_ - 1];
      if (i_ == own_) {
        out.effect = {AccessKind::Read, i_, seen, 4};
        pending_read_ = seen.value;
        pc_ = Pc::IncrementWrite;
        return out;
      }
      out.effect = {AccessKind::Read, i_, seen, 5};
      sum_ += seen.value;
      break;
    }
    case Pc::IncrementWrite: {
      const SimpleRegisterValue written{*pending_read_ + 1};
      out.effect = {AccessKind::Write, own_, written, 4};
      sum_ += written.value;
      pending_read_.reset();
      break;
    }
  }
  ++i_;
  if (i_ > registers_) {
    pc_ = Pc::Done;
    out.returned = SimpleTimestamp{sum_};
  } else {
    pc_ = Pc::Read;
  }
  return out;
}

void SimpleMachine::append_key(std::string& key) const {
  detail::put_varint(key, static_cast<std::uint32_t>(pc_));
  if (pc_ == Pc::Done) return;
  detail::put_varint(key, i_);
  detail::put_varint(key, sum_);
  detail::put_varint(key, pending_read_.value_or(0));
}

// ---------------------------------------------------------------------------
// PhaseMachine

std::uint16_t line_of(PhaseMachine::Pc pc) {
  using Pc = PhaseMachine::Pc;
  switch (pc) {
    case Pc::WhileRead: return 1;
    case Pc::ForCheckSentinel: return 6;
    case Pc::ForCheckValid: return 7;
    case Pc::WriteTurn: return 8;
    case Pc::ReadRnd: return 10;
    case Pc::WriteOverwrite: return 11;
    case Pc::Scan: return 13;
    case Pc::WriteNewRound: return 15;
    case Pc::Returned: return 16;
  }
  return 0;
}

std::string_view to_string(PhaseMachine::Pc pc) {
  using Pc = PhaseMachine::Pc;
  switch (pc) {
    case Pc::WhileRead: return "while-read";
    case Pc::ForCheckSentinel: return "for-check-sentinel";
    case Pc::ForCheckValid: return "for-check-valid";
    case Pc::WriteTurn: return "write-turn";
    case Pc::ReadRnd: return "read-rnd";
    case Pc::WriteOverwrite: return "write-overwrite";
    case Pc::Scan: return "scan-collect";
    case Pc::WriteNewRound: return "write-new-round";
    case Pc::Returned: return "returned";
  }
  return "?";
}

PhaseMachine::PhaseMachine(std::uint32_t pid, std::uint32_t seq, std::uint32_t m)
    : id_{pid, seq}, m_(m) {
  if (m < 2) throw std::invalid_argument("phase machine needs m >= 2 (sentinel register)");
  if (pid == 0 || seq == 0) throw std::invalid_argument("phase machine needs pid, seq >= 1");
  r_.resize(m);
}

const RegisterValue& PhaseMachine::read(std::span<const RegisterValue> registers,
                                        std::uint32_t reg) const {
  if (reg == 0 || reg > registers.size()) {
    throw RegisterOverflow(reg, static_cast<std::uint32_t>(registers.size()));
  }
  return registers[reg - 1];
}

Access<RegisterValue> PhaseMachine::next_access() const {
  switch (pc_) {
    case Pc::WhileRead:
    case Pc::ForCheckValid:
    case Pc::ReadRnd:
      return {AccessKind::Read, j_, {}};
    case Pc::ForCheckSentinel:
      return {AccessKind::Read, *myrnd_ + 1, {}};
    case Pc::Scan:
      return {AccessKind::Read, pos_, {}};
    case Pc::WriteTurn:
    case Pc::WriteOverwrite:
      return {AccessKind::Write, j_, own_pair()};
    case Pc::WriteNewRound:
      return {AccessKind::Write, *myrnd_ + 1, new_round_value()};
    case Pc::Returned:
      break;
  }
  throw std::logic_error("next_access on a returned phase machine");
}

RegisterValue PhaseMachine::own_pair() const { return RegisterValue({id_}, *myrnd_); }

RegisterValue PhaseMachine::new_round_value() const {
  const std::uint32_t myrnd = *myrnd_;
  std::vector<GetTsId> seq;
  seq.reserve(myrnd + 1);
  for (std::uint32_t i = 0; i < myrnd; ++i) {
    if (r_[i].is_bottom()) {
      throw std::logic_error("line 15: scanned view has bottom below myrnd+1");
    }
    seq.push_back(r_[i].last());
  }
  seq.push_back(id_);
  return RegisterValue(std::move(seq), myrnd + 1);
}

void PhaseMachine::enter_for_loop() {
  j_ = 1;
  if (*myrnd_ >= 2) {
    pc_ = Pc::ForCheckSentinel;
    return;
  }
  pc_ = Pc::Scan;
  collects_ = 0;
  pos_ = 1;
  cur_view_.assign(m_, RegisterValue());
}

void PhaseMachine::advance_for_loop() {
  ++j_;
  if (j_ + 1 <= *myrnd_) {
    pc_ = Pc::ForCheckSentinel;
    return;
  }
  pc_ = Pc::Scan;
  collects_ = 0;
  pos_ = 1;
  cur_view_.assign(m_, RegisterValue());
}

StepResult<RegisterValue, PhaseTimestamp> PhaseMachine::step(
    std::span<const RegisterValue> registers) {
  StepResult<RegisterValue, PhaseTimestamp> out;
  const std::uint16_t line = line_of(pc_);
  switch (pc_) {
    case Pc::Returned:
      throw std::logic_error("step on a returned phase machine");

    case Pc::WhileRead: {
      const RegisterValue& seen = read(registers, j_);
      out.effect = {AccessKind::Read, j_, seen, line};
      if (!seen.is_bottom()) {
        r_[j_ - 1] = seen;
        ++j_;
      } else {
        myrnd_ = j_ - 1;
        out.notes.myrnd = myrnd_;
        enter_for_loop();
      }
      break;
    }

    case Pc::ForCheckSentinel: {
      const std::uint32_t reg = *myrnd_ + 1;
      const RegisterValue& seen = read(registers, reg);
      out.effect = {AccessKind::Read, reg, seen, line};
      if (!seen.is_bottom()) {
        out.returned = PhaseTimestamp{*myrnd_ + 1, 0};
        pc_ = Pc::Returned;
      } else {
        pc_ = Pc::ForCheckValid;
      }
      break;
    }

    case Pc::ForCheckValid: {
      const RegisterValue& seen = read(registers, j_);
      out.effect = {AccessKind::Read, j_, seen, line};
      if (seen.is_bottom()) throw std::logic_error("line 7 read bottom below myrnd");
      const auto expected = r_[*myrnd_ - 1].seq();
      const bool valid = j_ <= expected.size() && expected[j_ - 1] == seen.last();
      pc_ = valid ? Pc::WriteTurn : Pc::ReadRnd;
      break;
    }

    case Pc::WriteTurn: {
      out.effect = {AccessKind::Write, j_, own_pair(), line};
      out.returned = PhaseTimestamp{*myrnd_, j_};
      pc_ = Pc::Returned;
      break;
    }

    case Pc::ReadRnd: {
      const RegisterValue& seen = read(registers, j_);
      out.effect = {AccessKind::Read, j_, seen, line};
      if (seen.is_bottom()) throw std::logic_error("line 10 read bottom below myrnd");
      if (seen.rnd() < *myrnd_) {
        pc_ = Pc::WriteOverwrite;
      } else {
        advance_for_loop();
      }
      break;
    }

    case Pc::WriteOverwrite: {
      out.effect = {AccessKind::Write, j_, own_pair(), line};
      advance_for_loop();
      break;
    }

    case Pc::Scan: {
      const RegisterValue& seen = read(registers, pos_);
      out.effect = {AccessKind::Read, pos_, seen, line};
      cur_view_[pos_ - 1] = seen;
      if (pos_ < m_) {
        ++pos_;
        break;
      }
      ++collects_;
      out.notes.collect_completed = true;
      if (collects_ >= 2 && cur_view_ == prev_view_) {
        out.notes.scan_completed = true;
        r_ = std::move(cur_view_);
        cur_view_.clear();
        prev_view_.clear();
        // line 14
        if (r_[*myrnd_].is_bottom()) {
          pc_ = Pc::WriteNewRound;
        } else {
          out.returned = PhaseTimestamp{*myrnd_ + 1, 0};
          pc_ = Pc::Returned;
        }
      } else {
        prev_view_.swap(cur_view_);
        cur_view_.assign(m_, RegisterValue());
        pos_ = 1;
      }
      break;
    }

    case Pc::WriteNewRound: {
      out.effect = {AccessKind::Write, *myrnd_ + 1, new_round_value(), line};
      out.returned = PhaseTimestamp{*myrnd_ + 1, 0};
      pc_ = Pc::Returned;
      break;
    }
  }
  if (out.effect.kind == AccessKind::Write && out.effect.reg > registers.size()) {
    throw RegisterOverflow(out.effect.reg, static_cast<std::uint32_t>(registers.size()));
  }
  return out;
}

// Only live locals enter the key: r[myrnd] until the scan, the scan buffers
// during the scan, and the scanned prefix r[1..myrnd] before line 15.
void PhaseMachine::append_key(std::string& key) const {
  detail::put_varint(key, static_cast<std::uint32_t>(pc_));
  if (pc_ == Pc::Returned) return;
  detail::put_varint(key, id_.seq);
  detail::put_varint(key, j_);
  detail::put_varint(key, myrnd_.value_or(0));
  switch (pc_) {
    case Pc::WhileRead:
      if (j_ >= 2) tsforge::append_key(key, r_[j_ - 2]);
      break;
    case Pc::ForCheckSentinel:
    case Pc::ForCheckValid:
    case Pc::WriteTurn:
    case Pc::ReadRnd:
    case Pc::WriteOverwrite:
      tsforge::append_key(key, r_[*myrnd_ - 1]);
      break;
    case Pc::Scan:
      detail::put_varint(key, collects_ >= 1 ? 1 : 0);
      detail::put_varint(key, pos_);
      if (collects_ >= 1) {
        for (const RegisterValue& v : prev_view_) tsforge::append_key(key, v);
      }
      for (std::uint32_t i = 0; i + 1 < pos_; ++i) tsforge::append_key(key, cur_view_[i]);
      break;
    case Pc::WriteNewRound:
      for (std::uint32_t i = 0; i < *myrnd_; ++i) tsforge::append_key(key, r_[i]);
      break;
    case Pc::Returned:
      break;
  }
}

}  // namespace tsforge
