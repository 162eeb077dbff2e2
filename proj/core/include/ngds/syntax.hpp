// Copyright 2026 The NGDS Authors. All rights reserved.
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

// Textual program syntax.
//
//   Concat(ConstStr("a"), Substr(0, Pair(AbsPos(-5), RegexPos(Digits, EndOfString, 1))))
//   Substr(0, RegexOcc(Char('('), -1))
//
// String literals escape `"`, `\`, newline, tab and any byte outside
// printable ASCII as \xNN. The printer is canonical: one space after each
// comma, no other whitespace.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ngds/dsl.hpp"

namespace ngds {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

std::string print_program(const Program& p);

/// Parses the canonical syntax; insignificant whitespace is accepted.
/// Throws ParseError with the byte offset of the failure.
Program parse_program(std::string_view text);

/// Quotes and escapes a string the way ConstStr literals are printed.
std::string quote_string(std::string_view s);

}  // namespace ngds
