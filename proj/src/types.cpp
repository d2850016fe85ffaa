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

#include "tsforge/types.hpp"

#include <algorithm>
#include <charconv>

namespace tsforge {

namespace {

constexpr std::string_view kBottom = "\xE2\x8A\xA5";  // U+22A5 UP TACK

// Minimal cursor over canonical text; every parse must consume all input.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::uint32_t number() {
    std::uint32_t out = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr == begin) fail("expected unsigned integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return out;
  }

  void finish() {
    if (pos_ != text_.size()) fail("trailing characters");
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("cannot parse '" + std::string(text_) + "': " + why);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

GetTsId read_id(Cursor& cur) {
  cur.expect('p');
  GetTsId id;
  id.process = cur.number();
  cur.expect('.');
  id.seq = cur.number();
  if (id.process == 0 || id.seq == 0) cur.fail("process and seq must be positive");
  return id;
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  return algo == Algorithm::Simple ? "simple" : "phase";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "simple") return Algorithm::Simple;
  if (text == "phase") return Algorithm::Phase;
  throw ParseError("unknown algorithm '" + std::string(text) + "'");
}

bool compare(const PhaseTimestamp& t1, const PhaseTimestamp& t2) noexcept {
  return (t1.rnd < t2.rnd) || ((t1.rnd == t2.rnd) && (t1.turn < t2.turn));
}

bool simple_compare(SimpleTimestamp t1, SimpleTimestamp t2) noexcept {
  return t1.value < t2.value;
}

RegisterValue::RegisterValue(std::vector<GetTsId> seq, std::uint32_t rnd) {
  if (seq.empty()) throw std::invalid_argument("register value needs a nonempty seq");
  if (rnd == 0) throw std::invalid_argument("register value needs rnd >= 1");
  pair_ = std::make_shared<const Pair>(Pair{std::move(seq), rnd});
}

std::span<const GetTsId> RegisterValue::seq() const {
  if (!pair_) throw std::logic_error("seq() of bottom register value");
  return pair_->seq;
}

GetTsId RegisterValue::last() const {
  if (!pair_) throw std::logic_error("last() of bottom register value");
  return pair_->seq.back();
}

std::uint32_t RegisterValue::rnd() const {
  if (!pair_) throw std::logic_error("rnd() of bottom register value");
  return pair_->rnd;
}

bool operator==(const RegisterValue& a, const RegisterValue& b) noexcept {
  if (a.pair_ == b.pair_) return true;
  if (!a.pair_ || !b.pair_) return false;
  return a.pair_->rnd == b.pair_->rnd && a.pair_->seq == b.pair_->seq;
}

std::string to_string(const PhaseTimestamp& ts) {
  return "(" + std::to_string(ts.rnd) + "," + std::to_string(ts.turn) + ")";
}

std::string to_string(SimpleTimestamp ts) { return std::to_string(ts.value); }

std::string to_string(const GetTsId& id) {
  return "p" + std::to_string(id.process) + "." + std::to_string(id.seq);
}

std::string to_string(const RegisterValue& value) {
  if (value.is_bottom()) return std::string(kBottom);
  std::string out = "<[";
  bool first = true;
  for (const GetTsId& id : value.seq()) {
    if (!first) out += ',';
    out += to_string(id);
    first = false;
  }
  out += "],";
  out += std::to_string(value.rnd());
  out += '>';
  return out;
}

std::string to_string(SimpleRegisterValue value) { return std::to_string(value.value); }

PhaseTimestamp parse_phase_timestamp(std::string_view text) {
  Cursor cur(text);
  PhaseTimestamp ts;
  cur.expect('(');
  ts.rnd = cur.number();
  cur.expect(',');
  ts.turn = cur.number();
  cur.expect(')');
  cur.finish();
  if (ts.rnd == 0) cur.fail("rnd must be positive");
  return ts;
}

SimpleTimestamp parse_simple_timestamp(std::string_view text) {
  Cursor cur(text);
  SimpleTimestamp ts{cur.number()};
  cur.finish();
  return ts;
}

GetTsId parse_getts_id(std::string_view text) {
  Cursor cur(text);
  GetTsId id = read_id(cur);
  cur.finish();
  return id;
}

RegisterValue parse_register_value(std::string_view text) {
  if (text == kBottom) return RegisterValue::bottom();
  Cursor cur(text);
  cur.expect('<');
  cur.expect('[');
  std::vector<GetTsId> seq;
  do {
    seq.push_back(read_id(cur));
  } while (cur.accept(','));
  cur.expect(']');
  cur.expect(',');
  std::uint32_t rnd = cur.number();
  cur.expect('>');
  cur.finish();
  if (rnd == 0) cur.fail("rnd must be positive");
  return RegisterValue(std::move(seq), rnd);
}

SimpleRegisterValue parse_simple_register_value(std::string_view text) {
  Cursor cur(text);
  SimpleRegisterValue value{cur.number()};
  cur.finish();
  return value;
}

std::uint32_t phase_register_bound(std::uint32_t calls) {
  const std::uint64_t target = 4ull * calls;
  std::uint64_t m = 0;
  while (m * m < target) ++m;
  return static_cast<std::uint32_t>(m);
}

}  // namespace tsforge
