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

// Specs: sets of (input state, output constraint) pairs. An output
// constraint is a disjunction of admissible values whose type follows the
// symbol being learned: strings for transform/atom, spans for pp and
// positions for pos.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ngds/dsl.hpp"

namespace ngds {

/// One output constraint. Only the vector matching the owning Spec's type is
/// used; values are sorted and deduplicated. An empty vector means
/// Unsatisfiable.
struct Constraint {
  InputState state;
  std::vector<std::string> strings;
  std::vector<Span> spans;
  std::vector<int> positions;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Spec {
  ValueType type = ValueType::String;
  std::vector<Constraint> constraints;
  std::vector<InputState> unlabeled;

  std::size_t size() const { return constraints.size(); }
  friend bool operator==(const Spec&, const Spec&) = default;
};

ValueType value_type(SymbolId s);

/// String spec from (inputs, output) examples.
Spec make_string_spec(const std::vector<std::pair<std::vector<std::string>, std::string>>& examples,
                      std::vector<InputState> unlabeled = {});

/// Sorts and deduplicates every disjunction in place.
void canonicalize(Spec& spec);

bool is_unsatisfiable(const Spec& spec);

/// Compact unambiguous serialization, used as a memoization key.
std::string spec_key(const Spec& spec);

/// True when `p` produces an admissible value on every constraint.
/// `p` must match the spec's type (transform/atom for strings, pp for spans,
/// pos for positions; pp/pos are resolved against the bound x).
bool satisfies(const Program& p, const Spec& spec);

}  // namespace ngds
