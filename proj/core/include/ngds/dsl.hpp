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

// The string-transformation DSL: tokens, the program AST, the grammar
// description and the evaluator.
//
//   transform := atom | Concat(atom, transform)
//   atom      := ConstStr(s) | let x = std.Kth(inputs, k) in Substring(x, pp)
//   pp        := std.Pair(pos, pos) | RegexOccurrence(x, r, k)
//   pos       := AbsolutePosition(x, k) | RegexPosition(x, std.Pair(r, r), k)

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ngds {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenId : std::uint8_t {
  Epsilon,
  StartOfString,
  EndOfString,
  Digits,
  Letters,
  Lowercase,
  Uppercase,
  Alphanumeric,
  Whitespace,
  LParen,
  RParen,
  Hyphen,
  Dot,
  Comma,
  Colon,
  Semicolon,
  Slash,
  At,
  Underscore,
  DoubleQuote,
  Quote,
  Space,
};

inline constexpr std::size_t kTokenCount = 22;

/// All tokens in vocabulary order.
std::span<const TokenId> all_tokens();

/// Canonical printed name: `Digits`, `Char('(')`, `Epsilon`, ...
std::string token_name(TokenId t);

/// The matched character for single-character tokens.
std::optional<char> token_char(TokenId t);

/// Epsilon and the two anchors match only the empty string.
bool is_zero_width(TokenId t);

/// Default specificity weight used by the ranking function.
double default_token_specificity(TokenId t);

struct Span {
  int start = 0;
  int end = 0;
  friend auto operator<=>(const Span&, const Span&) = default;
};

/// Left-to-right occurrences of a token in `x`. Class tokens match maximal
/// runs, punctuation tokens single characters, Epsilon every boundary as a
/// zero-width span and the anchors their single boundary.
std::vector<Span> find_token_occurrences(TokenId t, std::string_view x);

/// Precomputed occurrence tables for one string.
class TokenIndex {
 public:
  explicit TokenIndex(std::string_view x);

  int length() const { return length_; }
  const std::vector<Span>& occurrences(TokenId t) const;
  /// True when some occurrence of `t` ends at boundary `p`.
  bool ends_at(TokenId t, int p) const;
  /// True when some occurrence of `t` starts at boundary `p`.
  bool starts_at(TokenId t, int p) const;
  /// Sorted boundaries p with `left` ending at p and `right` starting at p.
  std::vector<int> boundaries(TokenId left, TokenId right) const;

 private:
  int length_;
  std::array<std::vector<Span>, kTokenCount> occurrences_;
  // ends_[t][p], starts_[t][p] for p in [0, length].
  std::array<std::vector<bool>, kTokenCount> ends_;
  std::array<std::vector<bool>, kTokenCount> starts_;
};

// ---------------------------------------------------------------------------
// Program AST
// ---------------------------------------------------------------------------

enum class NodeKind : std::uint8_t {
  Concat,
  ConstStr,
  Substr,
  Pair,
  RegexOcc,
  AbsPos,
  RegexPos,
};

/// Immutable program tree with shared structure. Copying is cheap.
class Program {
 public:
  static Program concat(Program atom, Program rest);
  static Program const_str(std::string literal);
  static Program substr(int input_index, Program range);
  static Program pair(Program start, Program end);
  static Program regex_occ(TokenId token, int occurrence);
  static Program abs_pos(int k);
  static Program regex_pos(TokenId left, TokenId right, int occurrence);

  NodeKind kind() const;

  // Concat: child(0) = atom, child(1) = rest. Substr: child(0) = range.
  // Pair: child(0) = start, child(1) = end.
  const Program& child(std::size_t i) const;
  std::size_t child_count() const;

  const std::string& literal() const;  // ConstStr
  int input_index() const;             // Substr
  int occurrence() const;              // RegexOcc, RegexPos
  int abs_index() const;               // AbsPos
  TokenId token() const;               // RegexOcc
  TokenId left_token() const;          // RegexPos
  TokenId right_token() const;         // RegexPos

  /// Number of AST nodes.
  int size() const;

  friend bool operator==(const Program& a, const Program& b);

 private:
  struct Node;
  explicit Program(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

enum class SymbolId : std::uint8_t { Transform, Atom, Pp, Pos };
inline constexpr std::size_t kSymbolCount = 4;

enum class ProductionId : std::uint8_t {
  TransformAtom,
  TransformConcat,
  AtomConstStr,
  AtomSubstr,
  PpPair,
  PpRegexOcc,
  PosAbs,
  PosRegex,
};
inline constexpr std::size_t kProductionCount = 8;

enum class ValueType : std::uint8_t { String, Span, Position };

struct SymbolInfo {
  SymbolId id;
  std::string_view name;
  ValueType result;
  int depth;  // minimal distance from the start symbol
};

struct ProductionInfo {
  ProductionId id;
  SymbolId lhs;
  std::string_view name;
  std::vector<SymbolId> params;  // nonterminal parameters, in order
};

class Grammar {
 public:
  /// The FlashFill subset used throughout the engine.
  static const Grammar& flashfill();

  SymbolId start() const { return SymbolId::Transform; }
  std::string_view input_variable() const { return "inputs"; }
  std::span<const SymbolInfo> symbols() const { return symbols_; }
  const SymbolInfo& symbol(SymbolId s) const;
  const ProductionInfo& production(ProductionId p) const;
  std::span<const ProductionId> productions(SymbolId s) const;

 private:
  Grammar();
  std::vector<SymbolInfo> symbols_;
  std::vector<ProductionInfo> productions_;
  std::array<std::vector<ProductionId>, kSymbolCount> by_symbol_;
};

std::string_view symbol_name(SymbolId s);
std::string_view production_name(ProductionId p);
std::optional<SymbolId> parse_symbol_name(std::string_view name);
std::optional<ProductionId> parse_production_name(std::string_view name);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Values bound to the DSL's free variables: `inputs`, and the local `x`
/// (as an index into inputs) inside a Substring.
struct InputState {
  std::vector<std::string> inputs;
  std::optional<std::size_t> bound;

  const std::string& x() const { return inputs.at(bound.value()); }
  friend bool operator==(const InputState&, const InputState&) = default;
};

/// Resolves a position expression against `x`. nullopt when the position is
/// outside [0, len(x)] or the requested occurrence does not exist.
std::optional<int> resolve_position(const Program& pos, std::string_view x);
std::optional<int> resolve_position(const Program& pos, const TokenIndex& index);

/// Resolves a position-pair expression (Pair or RegexOcc) against `x`.
std::optional<Span> resolve_range(const Program& pp, std::string_view x);

/// Runs a transform/atom program. nullopt means the program does not apply to
/// this state (an index ran out of range).
std::optional<std::string> eval_program(const Program& p, const InputState& state);

}  // namespace ngds
