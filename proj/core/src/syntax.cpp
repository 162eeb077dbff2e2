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

#include "ngds/syntax.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace ngds {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

namespace {

constexpr char kHex[] = "0123456789ABCDEF";

void append_escaped(std::string& out, char c, char quote) {
  const auto u = static_cast<unsigned char>(c);
  if (c == quote || c == '\\') {
    out += '\\';
    out += c;
  } else if (c == '\n') {
    out += "\\n";
  } else if (c == '\t') {
    out += "\\t";
  } else if (u < 0x20 || u >= 0x7f) {
    out += "\\x";
    out += kHex[u >> 4];
    out += kHex[u & 0xf];
  } else {
    out += c;
  }
}

void print_into(std::string& out, const Program& p) {
  switch (p.kind()) {
    case NodeKind::Concat:
      out += "Concat(";
      print_into(out, p.child(0));
      out += ", ";
      print_into(out, p.child(1));
      out += ')';
      return;
    case NodeKind::ConstStr:
      out += "ConstStr(";
      out += quote_string(p.literal());
      out += ')';
      return;
    case NodeKind::Substr:
      out += "Substr(";
      out += std::to_string(p.input_index());
      out += ", ";
      print_into(out, p.child(0));
      out += ')';
      return;
    case NodeKind::Pair:
      out += "Pair(";
      print_into(out, p.child(0));
      out += ", ";
      print_into(out, p.child(1));
      out += ')';
      return;
    case NodeKind::RegexOcc:
      out += "RegexOcc(";
      out += token_name(p.token());
      out += ", ";
      out += std::to_string(p.occurrence());
      out += ')';
      return;
    case NodeKind::AbsPos:
      out += "AbsPos(";
      out += std::to_string(p.abs_index());
      out += ')';
      return;
    case NodeKind::RegexPos:
      out += "RegexPos(";
      out += token_name(p.left_token());
      out += ", ";
      out += token_name(p.right_token());
      out += ", ";
      out += std::to_string(p.occurrence());
      out += ')';
      return;
  }
}

enum class Expect { String, Range, Position };

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program parse_all() {
    Program p = parse_string_program();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after program");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view identifier() {
    skip_ws();
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (begin == pos_) fail("expected an operator name");
    return text_.substr(begin, pos_ - begin);
  }

  int integer() {
    skip_ws();
    const std::size_t begin = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    int value = 0;
    const auto* first = text_.data() + begin;
    const auto* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
      pos_ = begin;
      fail("expected an integer");
    }
    return value;
  }

  char escape(char quote) {
    // Positioned just after the backslash.
    if (pos_ >= text_.size()) fail("unterminated escape");
    const char c = text_[pos_++];
    if (c == quote || c == '\\') return c;
    if (c == 'n') return '\n';
    if (c == 't') return '\t';
    if (c == 'x') {
      if (pos_ + 2 > text_.size()) fail("truncated \\x escape");
      int value = 0;
      for (int i = 0; i < 2; ++i) {
        const char h = text_[pos_++];
        int d;
        if (h >= '0' && h <= '9') d = h - '0';
        else if (h >= 'a' && h <= 'f') d = h - 'a' + 10;
        else if (h >= 'A' && h <= 'F') d = h - 'A' + 10;
        else { --pos_; fail("bad hex digit in \\x escape"); }
        value = value * 16 + d;
      }
      return static_cast<char>(value);
    }
    --pos_;
    fail("unknown escape");
  }

  std::string string_literal() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected a string literal");
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string literal");
      const char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') out += escape('"');
      else out += c;
    }
    return out;
  }

  TokenId token() {
    skip_ws();
    const std::size_t begin = pos_;
    std::string_view name = identifier();
    if (name == "Char") {
      expect('(');
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '\'') fail("expected a character literal");
      ++pos_;
      if (pos_ >= text_.size()) fail("unterminated character literal");
      char c = text_[pos_++];
      if (c == '\\') c = escape('\'');
      if (pos_ >= text_.size() || text_[pos_] != '\'') fail("expected closing quote");
      ++pos_;
      expect(')');
      for (TokenId t : all_tokens()) {
        if (token_char(t) == c) return t;
      }
      pos_ = begin;
      fail("character is not in the token vocabulary");
    }
    for (TokenId t : all_tokens()) {
      if (!token_char(t) && token_name(t) == name) return t;
    }
    pos_ = begin;
    fail("unknown token '" + std::string(name) + "'");
  }

  Program parse_string_program() {
    const std::size_t begin = (skip_ws(), pos_);
    std::string_view op = identifier();
    if (op == "Concat") {
      expect('(');
      const std::size_t atom_begin = (skip_ws(), pos_);
      Program atom = parse_string_program();
      if (atom.kind() == NodeKind::Concat) {
        pos_ = atom_begin;
        fail("the first Concat argument must be an atom");
      }
      expect(',');
      Program rest = parse_string_program();
      expect(')');
      return Program::concat(std::move(atom), std::move(rest));
    }
    if (op == "ConstStr") {
      expect('(');
      std::string literal = string_literal();
      expect(')');
      return Program::const_str(std::move(literal));
    }
    if (op == "Substr") {
      expect('(');
      const int k = integer();
      if (k < 0) fail("input index must be non-negative");
      expect(',');
      Program range = parse_range();
      expect(')');
      return Program::substr(k, std::move(range));
    }
    pos_ = begin;
    fail("expected Concat, ConstStr or Substr");
  }

  Program parse_range() {
    const std::size_t begin = (skip_ws(), pos_);
    std::string_view op = identifier();
    if (op == "Pair") {
      expect('(');
      Program start = parse_position();
      expect(',');
      Program end = parse_position();
      expect(')');
      return Program::pair(std::move(start), std::move(end));
    }
    if (op == "RegexOcc") {
      expect('(');
      const TokenId t = token();
      expect(',');
      const int j = occurrence();
      expect(')');
      return Program::regex_occ(t, j);
    }
    pos_ = begin;
    fail("expected Pair or RegexOcc");
  }

  Program parse_position() {
    const std::size_t begin = (skip_ws(), pos_);
    std::string_view op = identifier();
    if (op == "AbsPos") {
      expect('(');
      const int k = integer();
      expect(')');
      return Program::abs_pos(k);
    }
    if (op == "RegexPos") {
      expect('(');
      const TokenId l = token();
      expect(',');
      const TokenId r = token();
      expect(',');
      const int j = occurrence();
      expect(')');
      return Program::regex_pos(l, r, j);
    }
    pos_ = begin;
    fail("expected AbsPos or RegexPos");
  }

  int occurrence() {
    const std::size_t begin = (skip_ws(), pos_);
    const int j = integer();
    if (j == 0) {
      pos_ = begin;
      fail("occurrence index 0 is invalid; use 1.. from the left or -1.. from the right");
    }
    return j;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string quote_string(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (char c : s) append_escaped(out, c, '"');
  out += '"';
  return out;
}

std::string print_program(const Program& p) {
  std::string out;
  print_into(out, p);
  return out;
}

Program parse_program(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace ngds
