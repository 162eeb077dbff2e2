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

#include "ngds/dsl.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace ngds {

namespace {

constexpr std::array<TokenId, kTokenCount> kAllTokens = {
    TokenId::Epsilon,     TokenId::StartOfString, TokenId::EndOfString,
    TokenId::Digits,      TokenId::Letters,       TokenId::Lowercase,
    TokenId::Uppercase,   TokenId::Alphanumeric,  TokenId::Whitespace,
    TokenId::LParen,      TokenId::RParen,        TokenId::Hyphen,
    TokenId::Dot,         TokenId::Comma,         TokenId::Colon,
    TokenId::Semicolon,   TokenId::Slash,         TokenId::At,
    TokenId::Underscore,  TokenId::DoubleQuote,   TokenId::Quote,
    TokenId::Space,
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Character-class predicate for run tokens; nullptr for other tokens.
using ClassFn = bool (*)(char);

ClassFn class_of(TokenId t) {
  switch (t) {
    case TokenId::Digits:
      return is_digit;
    case TokenId::Letters:
      return [](char c) { return is_lower(c) || is_upper(c); };
    case TokenId::Lowercase:
      return is_lower;
    case TokenId::Uppercase:
      return is_upper;
    case TokenId::Alphanumeric:
      return [](char c) { return is_lower(c) || is_upper(c) || is_digit(c); };
    case TokenId::Whitespace:
      return is_space;
    default:
      return nullptr;
  }
}

}  // namespace

std::span<const TokenId> all_tokens() { return kAllTokens; }

std::optional<char> token_char(TokenId t) {
  switch (t) {
    case TokenId::LParen: return '(';
    case TokenId::RParen: return ')';
    case TokenId::Hyphen: return '-';
    case TokenId::Dot: return '.';
    case TokenId::Comma: return ',';
    case TokenId::Colon: return ':';
    case TokenId::Semicolon: return ';';
    case TokenId::Slash: return '/';
    case TokenId::At: return '@';
    case TokenId::Underscore: return '_';
    case TokenId::DoubleQuote: return '"';
    case TokenId::Quote: return '\'';
    case TokenId::Space: return ' ';
    default: return std::nullopt;
  }
}

std::string token_name(TokenId t) {
  switch (t) {
    case TokenId::Epsilon: return "Epsilon";
    case TokenId::StartOfString: return "StartOfString";
    case TokenId::EndOfString: return "EndOfString";
    case TokenId::Digits: return "Digits";
    case TokenId::Letters: return "Letters";
    case TokenId::Lowercase: return "Lowercase";
    case TokenId::Uppercase: return "Uppercase";
    case TokenId::Alphanumeric: return "Alphanumeric";
    case TokenId::Whitespace: return "Whitespace";
    default: break;
  }
  const char c = *token_char(t);
  if (c == '\'' || c == '\\') return std::string("Char('\\") + c + "')";
  return std::string("Char('") + c + "')";
}

bool is_zero_width(TokenId t) {
  return t == TokenId::Epsilon || t == TokenId::StartOfString || t == TokenId::EndOfString;
}

double default_token_specificity(TokenId t) {
  switch (t) {
    // Epsilon says nothing about the context; an (Epsilon, Epsilon) pair
    // must rank below the equivalent absolute position.
    case TokenId::Epsilon: return -4.0;
    case TokenId::StartOfString:
    case TokenId::EndOfString: return 2.0;
    case TokenId::Digits:
    case TokenId::Letters: return 2.0;
    case TokenId::Lowercase:
    case TokenId::Uppercase:
    case TokenId::Alphanumeric:
    case TokenId::Whitespace: return 1.0;
    default: return 1.0;
  }
}

std::vector<Span> find_token_occurrences(TokenId t, std::string_view x) {
  const int n = static_cast<int>(x.size());
  std::vector<Span> out;
  switch (t) {
    case TokenId::Epsilon:
      out.reserve(n + 1);
      for (int p = 0; p <= n; ++p) out.push_back({p, p});
      return out;
    case TokenId::StartOfString:
      if (n > 0) out.push_back({0, 0});
      return out;
    case TokenId::EndOfString:
      if (n > 0) out.push_back({n, n});
      return out;
    default:
      break;
  }
  if (auto c = token_char(t)) {
    for (int i = 0; i < n; ++i) {
      if (x[i] == *c) out.push_back({i, i + 1});
    }
    return out;
  }
  const ClassFn in_class = class_of(t);
  assert(in_class != nullptr);
  int i = 0;
  while (i < n) {
    if (!in_class(x[i])) {
      ++i;
      continue;
    }
    int j = i;
    while (j < n && in_class(x[j])) ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

TokenIndex::TokenIndex(std::string_view x) : length_(static_cast<int>(x.size())) {
  for (TokenId t : kAllTokens) {
    const auto i = static_cast<std::size_t>(t);
    occurrences_[i] = find_token_occurrences(t, x);
    ends_[i].assign(length_ + 1, false);
    starts_[i].assign(length_ + 1, false);
    for (const Span& s : occurrences_[i]) {
      ends_[i][s.end] = true;
      starts_[i][s.start] = true;
    }
  }
}

const std::vector<Span>& TokenIndex::occurrences(TokenId t) const {
  return occurrences_[static_cast<std::size_t>(t)];
}

bool TokenIndex::ends_at(TokenId t, int p) const {
  return p >= 0 && p <= length_ && ends_[static_cast<std::size_t>(t)][p];
}

bool TokenIndex::starts_at(TokenId t, int p) const {
  return p >= 0 && p <= length_ && starts_[static_cast<std::size_t>(t)][p];
}

std::vector<int> TokenIndex::boundaries(TokenId left, TokenId right) const {
  std::vector<int> out;
  const auto& e = ends_[static_cast<std::size_t>(left)];
  const auto& s = starts_[static_cast<std::size_t>(right)];
  for (int p = 0; p <= length_; ++p) {
    if (e[p] && s[p]) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Program::Node {
  NodeKind kind;
  std::string literal;
  int a = 0;  // input index, occurrence or absolute index
  TokenId t1 = TokenId::Epsilon;
  TokenId t2 = TokenId::Epsilon;
  std::vector<Program> children;
  int size = 1;
};

Program Program::concat(Program atom, Program rest) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Concat;
  n->size = 1 + atom.size() + rest.size();
  n->children = {std::move(atom), std::move(rest)};
  return Program(std::move(n));
}

Program Program::const_str(std::string literal) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::ConstStr;
  n->literal = std::move(literal);
  return Program(std::move(n));
}

Program Program::substr(int input_index, Program range) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Substr;
  n->a = input_index;
  n->size = 1 + range.size();
  n->children = {std::move(range)};
  return Program(std::move(n));
}

Program Program::pair(Program start, Program end) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Pair;
  n->size = 1 + start.size() + end.size();
  n->children = {std::move(start), std::move(end)};
  return Program(std::move(n));
}

Program Program::regex_occ(TokenId token, int occurrence) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::RegexOcc;
  n->t1 = token;
  n->a = occurrence;
  return Program(std::move(n));
}

Program Program::abs_pos(int k) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::AbsPos;
  n->a = k;
  return Program(std::move(n));
}

Program Program::regex_pos(TokenId left, TokenId right, int occurrence) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::RegexPos;
  n->t1 = left;
  n->t2 = right;
  n->a = occurrence;
  return Program(std::move(n));
}

NodeKind Program::kind() const { return node_->kind; }
const Program& Program::child(std::size_t i) const {
  assert(i < node_->children.size());
  return node_->children[i];
}
std::size_t Program::child_count() const { return node_->children.size(); }
const std::string& Program::literal() const { return node_->literal; }
int Program::input_index() const { return node_->a; }
int Program::occurrence() const { return node_->a; }
int Program::abs_index() const { return node_->a; }
TokenId Program::token() const { return node_->t1; }
TokenId Program::left_token() const { return node_->t1; }
TokenId Program::right_token() const { return node_->t2; }
int Program::size() const { return node_->size; }

bool operator==(const Program& a, const Program& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.a != y.a || x.t1 != y.t1 || x.t2 != y.t2 ||
      x.literal != y.literal || x.children.size() != y.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!(x.children[i] == y.children[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Grammar::Grammar() {
  symbols_ = {
      {SymbolId::Transform, "transform", ValueType::String, -1},
      {SymbolId::Atom, "atom", ValueType::String, -1},
      {SymbolId::Pp, "pp", ValueType::Span, -1},
      {SymbolId::Pos, "pos", ValueType::Position, -1},
  };
  productions_ = {
      {ProductionId::TransformAtom, SymbolId::Transform, "transform:=atom", {SymbolId::Atom}},
      {ProductionId::TransformConcat, SymbolId::Transform, "transform:=Concat",
       {SymbolId::Atom, SymbolId::Transform}},
      {ProductionId::AtomConstStr, SymbolId::Atom, "atom:=ConstStr", {}},
      {ProductionId::AtomSubstr, SymbolId::Atom, "atom:=Substring", {SymbolId::Pp}},
      {ProductionId::PpPair, SymbolId::Pp, "pp:=Pair", {SymbolId::Pos, SymbolId::Pos}},
      {ProductionId::PpRegexOcc, SymbolId::Pp, "pp:=RegexOccurrence", {}},
      {ProductionId::PosAbs, SymbolId::Pos, "pos:=AbsolutePosition", {}},
      {ProductionId::PosRegex, SymbolId::Pos, "pos:=RegexPosition", {}},
  };
  for (const auto& p : productions_) {
    by_symbol_[static_cast<std::size_t>(p.lhs)].push_back(p.id);
  }
  // Depth index: BFS distance from the start symbol.
  std::deque<SymbolId> queue{start()};
  symbols_[static_cast<std::size_t>(start())].depth = 0;
  while (!queue.empty()) {
    const SymbolId s = queue.front();
    queue.pop_front();
    const int d = symbols_[static_cast<std::size_t>(s)].depth;
    for (ProductionId pid : by_symbol_[static_cast<std::size_t>(s)]) {
      for (SymbolId child : productions_[static_cast<std::size_t>(pid)].params) {
        auto& info = symbols_[static_cast<std::size_t>(child)];
        if (info.depth < 0) {
          info.depth = d + 1;
          queue.push_back(child);
        }
      }
    }
  }
}

const Grammar& Grammar::flashfill() {
  static const Grammar g;
  return g;
}

const SymbolInfo& Grammar::symbol(SymbolId s) const {
  return symbols_[static_cast<std::size_t>(s)];
}

const ProductionInfo& Grammar::production(ProductionId p) const {
  return productions_[static_cast<std::size_t>(p)];
}

std::span<const ProductionId> Grammar::productions(SymbolId s) const {
  return by_symbol_[static_cast<std::size_t>(s)];
}

std::string_view symbol_name(SymbolId s) { return Grammar::flashfill().symbol(s).name; }

std::string_view production_name(ProductionId p) {
  return Grammar::flashfill().production(p).name;
}

std::optional<SymbolId> parse_symbol_name(std::string_view name) {
  for (const auto& s : Grammar::flashfill().symbols()) {
    if (s.name == name) return s.id;
  }
  return std::nullopt;
}

std::optional<ProductionId> parse_production_name(std::string_view name) {
  for (std::size_t i = 0; i < kProductionCount; ++i) {
    const auto id = static_cast<ProductionId>(i);
    if (production_name(id) == name) return id;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// j >= 1 counts from the left, j <= -1 from the right.
template <typename T>
std::optional<T> pick_occurrence(const std::vector<T>& items, int j) {
  const int n = static_cast<int>(items.size());
  if (j >= 1 && j <= n) return items[j - 1];
  if (j <= -1 && -j <= n) return items[n + j];
  return std::nullopt;
}

}  // namespace

std::optional<int> resolve_position(const Program& pos, const TokenIndex& index) {
  const int len = index.length();
  switch (pos.kind()) {
    case NodeKind::AbsPos: {
      const int k = pos.abs_index();
      const int p = k >= 0 ? k : len + k + 1;
      if (p < 0 || p > len) return std::nullopt;
      return p;
    }
    case NodeKind::RegexPos:
      return pick_occurrence(index.boundaries(pos.left_token(), pos.right_token()),
                             pos.occurrence());
    default:
      return std::nullopt;
  }
}

std::optional<int> resolve_position(const Program& pos, std::string_view x) {
  if (pos.kind() == NodeKind::AbsPos) {
    // Skip building the index for the common absolute case.
    const int len = static_cast<int>(x.size());
    const int k = pos.abs_index();
    const int p = k >= 0 ? k : len + k + 1;
    if (p < 0 || p > len) return std::nullopt;
    return p;
  }
  return resolve_position(pos, TokenIndex(x));
}

std::optional<Span> resolve_range(const Program& pp, std::string_view x) {
  switch (pp.kind()) {
    case NodeKind::Pair: {
      const TokenIndex index(x);
      auto s = resolve_position(pp.child(0), index);
      auto e = resolve_position(pp.child(1), index);
      if (!s || !e || *s > *e) return std::nullopt;
      return Span{*s, *e};
    }
    case NodeKind::RegexOcc:
      return pick_occurrence(find_token_occurrences(pp.token(), x), pp.occurrence());
    default:
      return std::nullopt;
  }
}

std::optional<std::string> eval_program(const Program& p, const InputState& state) {
  switch (p.kind()) {
    case NodeKind::ConstStr:
      return p.literal();
    case NodeKind::Concat: {
      auto left = eval_program(p.child(0), state);
      if (!left) return std::nullopt;
      auto right = eval_program(p.child(1), state);
      if (!right) return std::nullopt;
      return *left + *right;
    }
    case NodeKind::Substr: {
      const int k = p.input_index();
      if (k < 0 || k >= static_cast<int>(state.inputs.size())) return std::nullopt;
      const std::string& x = state.inputs[k];
      auto span = resolve_range(p.child(0), x);
      if (!span) return std::nullopt;
      return x.substr(span->start, span->end - span->start);
    }
    default:
      return std::nullopt;
  }
}

}  // namespace ngds
