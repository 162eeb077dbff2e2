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

#include "ngds/witness.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "ngds/spec.hpp"
#include "oracles.hpp"

namespace ngds {
namespace {

using T = TokenId;
using Strings = std::vector<std::string>;

template <class V, class X>
bool contains(const std::vector<V>& v, const X& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

TEST(ConcatPrefix, Examples) {
  EXPECT_EQ(witness_concat_prefix({"Y.L"}), (Strings{"Y", "Y."}));
  EXPECT_TRUE(witness_concat_prefix({"X"}).empty());
  EXPECT_EQ(witness_concat_prefix({"ab", "xy"}), (Strings{"a", "x"}));
  EXPECT_EQ(witness_concat_prefix({"abc", "ab"}), (Strings{"a", "ab"}));
}

TEST(ConcatSuffix, Examples) {
  EXPECT_EQ(witness_concat_suffix({"Y.L"}, "Y"), (Strings{".L"}));
  EXPECT_EQ(witness_concat_suffix({"Y.L"}, "Y."), (Strings{"L"}));
  EXPECT_EQ(witness_concat_suffix({"ab", "ax"}, "a"), (Strings{"b", "x"}));
  EXPECT_TRUE(witness_concat_suffix({"ab"}, "ab").empty());
  EXPECT_TRUE(witness_concat_suffix({"ab"}, "z").empty());
}

TEST(ConstStr, Intersection) {
  EXPECT_EQ(witness_conststr(make_string_spec({{{"Yann"}, "Y.L"}})), (Strings{"Y.L"}));
  EXPECT_TRUE(witness_conststr(make_string_spec({{{"x"}, "a"}, {{"y"}, "b"}})).empty());

  Spec s = make_string_spec({{{"Yann"}, "Y"}, {{"Yo"}, "Y"}});
  s.constraints[0].strings = {"Y", "Y."};
  canonicalize(s);
  EXPECT_EQ(witness_conststr(s), (Strings{"Y"}));
}

TEST(Substring, Spans) {
  const InputState yann{{"Yann"}, std::nullopt};
  EXPECT_EQ(witness_substring(yann, {"Y"}), (std::map<int, std::vector<Span>>{{0, {{0, 1}}}}));
  EXPECT_EQ(witness_substring(InputState{{"banana"}, std::nullopt}, {"an"}),
            (std::map<int, std::vector<Span>>{{0, {{1, 3}, {3, 5}}}}));
  EXPECT_TRUE(witness_substring(yann, {"Z"}).empty());
  EXPECT_TRUE(witness_substring(yann, {""}).empty());
  const auto two = witness_substring(InputState{{"ab", "xab"}, std::nullopt}, {"ab", "x"});
  EXPECT_EQ(two, (std::map<int, std::vector<Span>>{{0, {{0, 2}}}, {1, {{0, 1}, {1, 3}}}}));
}

TEST(Substring, MatchesBruteForceScan) {
  for (const std::string x : {"banana", "aaaa", "abcab", ""}) {
    for (const std::string v : {"a", "an", "ab", "aa", "zz"}) {
      std::vector<Span> want;
      for (int s = 0; s < static_cast<int>(x.size()); ++s)
        for (int e = s + 1; e <= static_cast<int>(x.size()); ++e)
          if (x.substr(s, e - s) == v) want.push_back({s, e});
      const auto got = witness_substring(InputState{{x}, std::nullopt}, {v});
      if (want.empty()) {
        EXPECT_TRUE(got.empty());
      } else {
        EXPECT_EQ(got.at(0), want) << x << " " << v;
      }
    }
  }
}

TEST(AbsPosition, TwoValues) {
  EXPECT_EQ(witness_abs_position("(612) 8729128", 9), (std::vector<int>{-5, 9}));
  EXPECT_EQ(witness_abs_position("Yann", 1), (std::vector<int>{-4, 1}));
  EXPECT_EQ(witness_abs_position("abc", 0), (std::vector<int>{-4, 0}));
  for (const std::string x : {"", "a", "hello world"})
    for (int p = 0; p <= static_cast<int>(x.size()); ++p) {
      const auto w = witness_abs_position(x, p);
      ASSERT_EQ(w.size(), 2u);
      for (int k : w) EXPECT_EQ(resolve_position(Program::abs_pos(k), x), p);
    }
}

TEST(RegexPosition, Examples) {
  const auto phone1 = witness_regex_position(std::string_view("(612) 8729128"), 1);
  EXPECT_TRUE(contains(phone1, RegexPosWitness{T::LParen, T::Epsilon, 1}));
  const auto phone4 = witness_regex_position(std::string_view("(612) 8729128"), 4);
  EXPECT_TRUE(contains(phone4, RegexPosWitness{T::Epsilon, T::RParen, 1}));
  EXPECT_TRUE(contains(phone4, RegexPosWitness{T::Digits, T::RParen, 1}));
  const auto ab1 = witness_regex_position(std::string_view("ab1"), 2);
  EXPECT_TRUE(contains(ab1, RegexPosWitness{T::Letters, T::Digits, 1}));
  EXPECT_TRUE(contains(ab1, RegexPosWitness{T::Letters, T::Digits, -1}));
  for (const auto& w : ab1) EXPECT_FALSE(w.left == T::Epsilon && w.right == T::Epsilon);
  EXPECT_TRUE(std::is_sorted(ab1.begin(), ab1.end()));
}

// Every triple resolves back to p, and every pair of tokens meeting at p is
// present with both of its indices.
TEST(RegexPosition, AgreesWithNaiveBoundaries) {
  for (const std::string x : {"ab1", "a-b c", "(612) 8729128", "AAbb"}) {
    for (int p = 0; p <= static_cast<int>(x.size()); ++p) {
      const auto got = witness_regex_position(std::string_view(x), p);
      std::vector<RegexPosWitness> want;
      for (T l : all_tokens())
        for (T r : all_tokens()) {
          if (l == T::Epsilon && r == T::Epsilon) continue;
          const auto b = oracle::naive_boundaries(l, r, x);
          auto it = std::find(b.begin(), b.end(), p);
          if (it == b.end()) continue;
          const int j = static_cast<int>(it - b.begin());
          want.push_back({l, r, j + 1});
          want.push_back({l, r, j - static_cast<int>(b.size())});
        }
      std::sort(want.begin(), want.end());
      EXPECT_EQ(got, want) << x << " @" << p;
      for (const auto& w : got)
        EXPECT_EQ(resolve_position(Program::regex_pos(w.left, w.right, w.occurrence), x), p);
    }
  }
}

TEST(RegexOccurrence, Examples) {
  const auto first = witness_regex_occurrence(std::string_view("a12b3"), Span{1, 3});
  EXPECT_TRUE(contains(first, RegexOccWitness{T::Digits, 1}));
  const auto last = witness_regex_occurrence(std::string_view("a12b3"), Span{4, 5});
  EXPECT_TRUE(contains(last, RegexOccWitness{T::Digits, -1}));
  EXPECT_TRUE(witness_regex_occurrence(std::string_view("abc"), Span{0, 0}).empty());
  EXPECT_TRUE(witness_regex_occurrence(std::string_view("abc"), Span{0, 2}).empty());
}

TEST(RegexOccurrence, AgreesWithOccurrenceLists) {
  for (const std::string x : {"a12b3", "x-y-z", "Ab cD"}) {
    const int n = static_cast<int>(x.size());
    for (int s = 0; s <= n; ++s)
      for (int e = s; e <= n; ++e) {
        std::vector<RegexOccWitness> want;
        if (e > s) {
          for (T t : all_tokens()) {
            const auto occ = oracle::naive_occurrences(t, x);
            auto it = std::find(occ.begin(), occ.end(), Span{s, e});
            if (it == occ.end()) continue;
            const int j = static_cast<int>(it - occ.begin());
            want.push_back({t, j + 1});
            want.push_back({t, j - static_cast<int>(occ.size())});
          }
        }
        std::sort(want.begin(), want.end());
        EXPECT_EQ(witness_regex_occurrence(std::string_view(x), Span{s, e}), want);
      }
  }
}

}  // namespace
}  // namespace ngds
