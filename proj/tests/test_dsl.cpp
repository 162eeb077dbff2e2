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

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

namespace ngds {
namespace {

using T = TokenId;

// The phone-number program: "(612) 8729128" -> "612-872-9128".
Program phone_program() {
  auto sub = [](Program a, Program b) { return Program::substr(0, Program::pair(a, b)); };
  return Program::concat(
      sub(Program::regex_pos(T::LParen, T::Epsilon, 1),
          Program::regex_pos(T::Epsilon, T::RParen, 1)),
      Program::concat(
          Program::const_str("-"),
          Program::concat(sub(Program::abs_pos(-8), Program::abs_pos(-5)),
                          Program::concat(Program::const_str("-"),
                                          sub(Program::abs_pos(-5), Program::abs_pos(-1))))));
}

InputState state(std::string x) { return InputState{{std::move(x)}, std::nullopt}; }

TEST(Grammar, ShapeMatchesFlashFillSubset) {
  const Grammar& g = Grammar::flashfill();
  EXPECT_EQ(g.start(), SymbolId::Transform);
  EXPECT_EQ(g.input_variable(), "inputs");
  ASSERT_EQ(g.symbols().size(), kSymbolCount);

  const std::vector<std::pair<SymbolId, std::vector<ProductionId>>> expected = {
      {SymbolId::Transform, {ProductionId::TransformAtom, ProductionId::TransformConcat}},
      {SymbolId::Atom, {ProductionId::AtomConstStr, ProductionId::AtomSubstr}},
      {SymbolId::Pp, {ProductionId::PpPair, ProductionId::PpRegexOcc}},
      {SymbolId::Pos, {ProductionId::PosAbs, ProductionId::PosRegex}},
  };
  for (const auto& [s, prods] : expected) {
    auto got = g.productions(s);
    EXPECT_EQ(std::vector<ProductionId>(got.begin(), got.end()), prods) << symbol_name(s);
    for (ProductionId p : prods) {
      EXPECT_EQ(g.production(p).lhs, s);
      for (SymbolId param : g.production(p).params) EXPECT_LT(static_cast<std::size_t>(param), kSymbolCount);
    }
  }
  EXPECT_EQ(g.production(ProductionId::TransformConcat).params,
            (std::vector<SymbolId>{SymbolId::Atom, SymbolId::Transform}));
  EXPECT_EQ(g.production(ProductionId::PpPair).params,
            (std::vector<SymbolId>{SymbolId::Pos, SymbolId::Pos}));
  EXPECT_EQ(g.symbol(SymbolId::Transform).depth, 0);
  EXPECT_EQ(g.symbol(SymbolId::Atom).depth, 1);
  EXPECT_EQ(g.symbol(SymbolId::Pp).depth, 2);
  EXPECT_EQ(g.symbol(SymbolId::Pos).depth, 3);
}

TEST(Grammar, NamesRoundTrip) {
  for (const SymbolInfo& s : Grammar::flashfill().symbols())
    EXPECT_EQ(parse_symbol_name(symbol_name(s.id)), s.id);
  for (std::size_t i = 0; i < kProductionCount; ++i) {
    const auto p = static_cast<ProductionId>(i);
    EXPECT_EQ(parse_production_name(production_name(p)), p);
  }
  EXPECT_FALSE(parse_symbol_name("nope"));
}

TEST(Eval, PhoneProgram) {
  EXPECT_EQ(eval_program(phone_program(), state("(612) 8729128")), "612-872-9128");
  // Hand execution: "(" ends at 1, ")" starts at 4; 13-8+1 = 6, 13-5+1 = 9.
  EXPECT_EQ(eval_program(phone_program(), state("(425) 7064550")), "425-706-4550");
}

TEST(Eval, ConstStrIgnoresState) {
  EXPECT_EQ(eval_program(Program::const_str("Y.L"), state("anything")), "Y.L");
  EXPECT_EQ(eval_program(Program::const_str("Y.L"), InputState{{"a", "b"}, std::nullopt}), "Y.L");
}

TEST(Eval, ErrorsSignalNonApplicability) {
  const Program whole = Program::pair(Program::abs_pos(0), Program::abs_pos(-1));
  EXPECT_FALSE(eval_program(Program::substr(1, whole), state("abc")));
  EXPECT_FALSE(eval_program(Program::substr(0, Program::pair(Program::abs_pos(0),
                                                             Program::abs_pos(9))),
                            state("abc")));
  EXPECT_FALSE(eval_program(Program::substr(0, Program::regex_occ(T::Digits, 2)), state("a1b")));
  // Start after end.
  EXPECT_FALSE(eval_program(Program::substr(0, Program::pair(Program::abs_pos(2),
                                                             Program::abs_pos(1))),
                            state("abc")));
  EXPECT_EQ(eval_program(Program::substr(1, whole), InputState{{"x", "yz"}, std::nullopt}), "yz");
}

TEST(Positions, AbsoluteFromBothEnds) {
  const std::string x = "(612) 8729128";
  EXPECT_EQ(resolve_position(Program::abs_pos(-8), x), 6);
  EXPECT_EQ(resolve_position(Program::abs_pos(-5), x), 9);
  EXPECT_EQ(resolve_position(Program::abs_pos(-1), x), 13);
  EXPECT_EQ(resolve_position(Program::abs_pos(0), x), 0);
  EXPECT_EQ(resolve_position(Program::abs_pos(0), ""), 0);
  EXPECT_FALSE(resolve_position(Program::abs_pos(14), x));
  EXPECT_FALSE(resolve_position(Program::abs_pos(-15), x));
}

TEST(Positions, ConventionConsistency) {
  for (const std::string x : {"", "a", "hello", "(612) 8729128"}) {
    const int n = static_cast<int>(x.size());
    for (int p = 0; p <= n; ++p) {
      EXPECT_EQ(resolve_position(Program::abs_pos(p), x), p);
      EXPECT_EQ(resolve_position(Program::abs_pos(p - n - 1), x), p);
    }
  }
}

TEST(Positions, RegexPosition) {
  const std::string x = "(612) 8729128";
  EXPECT_EQ(resolve_position(Program::regex_pos(T::LParen, T::Epsilon, 1), x), 1);
  EXPECT_EQ(resolve_position(Program::regex_pos(T::Epsilon, T::RParen, 1), x), 4);
  EXPECT_EQ(resolve_position(Program::regex_pos(T::Digits, T::EndOfString, -1), x), 13);
  EXPECT_EQ(resolve_position(Program::regex_pos(T::Space, T::Digits, 1), x), 6);
  EXPECT_FALSE(resolve_position(Program::regex_pos(T::LParen, T::Epsilon, 2), x));
  EXPECT_FALSE(resolve_position(Program::regex_pos(T::LParen, T::Epsilon, -2), x));
}

TEST(Positions, RegexPositionAgreesWithNaiveBoundaries) {
  for (const std::string x : {"ab1", "a12b3", "x-y z", "AB cd.9", ""}) {
    for (TokenId l : all_tokens())
      for (TokenId r : all_tokens()) {
        const auto bounds = oracle::naive_boundaries(l, r, x);
        const int n = static_cast<int>(bounds.size());
        for (int j = 1; j <= n + 1; ++j) {
          const auto from_left = resolve_position(Program::regex_pos(l, r, j), x);
          const auto from_right = resolve_position(Program::regex_pos(l, r, -j), x);
          if (j <= n) {
            EXPECT_EQ(from_left, bounds[j - 1]);
            EXPECT_EQ(from_right, bounds[n - j]);
          } else {
            EXPECT_FALSE(from_left);
            EXPECT_FALSE(from_right);
          }
        }
      }
  }
}

TEST(Tokens, Occurrences) {
  EXPECT_EQ(find_token_occurrences(T::Digits, "a12b3"), (std::vector<Span>{{1, 3}, {4, 5}}));
  EXPECT_EQ(find_token_occurrences(T::LParen, "(612) 8729128"), (std::vector<Span>{{0, 1}}));
  EXPECT_EQ(find_token_occurrences(T::Epsilon, "ab"), (std::vector<Span>{{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_EQ(find_token_occurrences(T::EndOfString, "ab"), (std::vector<Span>{{2, 2}}));
  for (TokenId t : all_tokens()) {
    if (t == T::Epsilon) continue;
    EXPECT_TRUE(find_token_occurrences(t, "").empty()) << token_name(t);
  }
  EXPECT_EQ(find_token_occurrences(T::Epsilon, ""), (std::vector<Span>{{0, 0}}));
}

TEST(Tokens, VocabularyIsClosed) {
  std::set<std::string> names;
  for (TokenId t : all_tokens()) names.insert(token_name(t));
  EXPECT_EQ(names.size(), kTokenCount);
  EXPECT_TRUE(is_zero_width(T::Epsilon));
  EXPECT_TRUE(is_zero_width(T::StartOfString));
  EXPECT_FALSE(is_zero_width(T::Digits));
  EXPECT_EQ(token_name(T::LParen), "Char('(')");
}

// Every string of length <= 12 over {a, B, 1, -}: 22.4M strings.
TEST(Tokens, AgreesWithNaiveMatcherExhaustively) {
  const std::string alphabet = "aB1-";
  std::string x;
  long checked = 0;
  std::vector<int> digits;
  for (int len = 0; len <= 12; ++len) {
    digits.assign(len, 0);
    x.assign(len, alphabet[0]);
    while (true) {
      for (TokenId t : all_tokens()) {
        if (find_token_occurrences(t, x) != oracle::naive_occurrences(t, x)) {
          FAIL() << token_name(t) << " on \"" << x << "\"";
        }
      }
      ++checked;
      int i = 0;
      while (i < len && ++digits[i] == 4) digits[i++] = 0;
      if (i == len) break;
      for (int j = 0; j <= i && j < len; ++j) x[j] = alphabet[digits[j]];
    }
  }
  EXPECT_EQ(checked, ((1L << 26) - 1) / 3);  // sum of 4^n for n <= 12
}

TEST(Eval, SubstringSoundness) {
  oracle::ProgramGenerator gen(7, 2);
  const InputState st{{"Alice Smith, 42", "x-ray (12)"}, std::nullopt};
  int ok = 0;
  for (int i = 0; i < 2000; ++i) {
    const Program a = gen.atom();
    if (a.kind() != NodeKind::Substr) continue;
    auto out = eval_program(a, st);
    if (!out) continue;
    ++ok;
    EXPECT_NE(st.inputs[a.input_index()].find(*out), std::string::npos);
    EXPECT_EQ(eval_program(a, st), out);  // deterministic
  }
  EXPECT_GT(ok, 50);
}

TEST(Program, SizeAndEquality) {
  EXPECT_EQ(Program::const_str("a").size(), 1);
  EXPECT_EQ(Program::substr(0, Program::regex_occ(T::Digits, 1)).size(), 2);
  EXPECT_EQ(phone_program().size(), 4 + 1 + 4 + 1 + 4 + 4);
  EXPECT_TRUE(phone_program() == phone_program());
  EXPECT_FALSE(Program::abs_pos(1) == Program::abs_pos(-1));
}

}  // namespace
}  // namespace ngds
