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

// Witness functions: for an operator and an output constraint, the
// necessary and sufficient constraints on the operator's parameters.
// Every result is sorted; an empty result means Unsatisfiable.

#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ngds/dsl.hpp"
#include "ngds/spec.hpp"

namespace ngds {

/// Non-empty proper prefixes of each value.
std::vector<std::string> witness_concat_prefix(const std::vector<std::string>& psi);

/// v[len(prefix)..] for every v in psi that has `prefix` as a proper prefix.
std::vector<std::string> witness_concat_suffix(const std::vector<std::string>& psi,
                                               std::string_view prefix);

/// Non-empty strings admissible on every constraint of a string spec.
std::vector<std::string> witness_conststr(const Spec& spec);

/// For each input index, the spans of inputs[i] that spell one of the
/// (non-empty) values. Indices without any span are omitted.
std::map<int, std::vector<Span>> witness_substring(const InputState& state,
                                                   const std::vector<std::string>& psi);

/// {p, p - len(x) - 1}, sorted.
std::vector<int> witness_abs_position(std::string_view x, int p);

struct RegexPosWitness {
  TokenId left;
  TokenId right;
  int occurrence;
  friend auto operator<=>(const RegexPosWitness&, const RegexPosWitness&) = default;
};

/// Every (l, r, j) with l ending and r starting at p, except (Epsilon,
/// Epsilon). Each pair appears with its from-left and from-right index.
std::vector<RegexPosWitness> witness_regex_position(const TokenIndex& x, int p);
std::vector<RegexPosWitness> witness_regex_position(std::string_view x, int p);

struct RegexOccWitness {
  TokenId token;
  int occurrence;
  friend auto operator<=>(const RegexOccWitness&, const RegexOccWitness&) = default;
};

/// Every (t, j) whose j-th occurrence of t is exactly `span`. Zero-width
/// spans have no witnesses.
std::vector<RegexOccWitness> witness_regex_occurrence(const TokenIndex& x, Span span);
std::vector<RegexOccWitness> witness_regex_occurrence(std::string_view x, Span span);

}  // namespace ngds
