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

#ifndef TSFORGE_DETAIL_KEY_UTIL_HPP_
#define TSFORGE_DETAIL_KEY_UTIL_HPP_

#include <cstdint>
#include <string>

namespace tsforge::detail {

// LEB128; dedup keys are dominated by small integers.
inline void put_varint(std::string& key, std::uint64_t v) {
  while (v >= 0x80) {
    key.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  key.push_back(static_cast<char>(v));
}

inline void put_signed(std::string& key, std::int64_t v) {
  put_varint(key, (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63));
}

}  // namespace tsforge::detail

#endif  // TSFORGE_DETAIL_KEY_UTIL_HPP_
