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

#include "ngds/spec.hpp"

#include <algorithm>

namespace ngds {

namespace {

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Length-prefixed so that no separator can collide with content.
void put(std::string& out, std::string_view s) {
  out += std::to_string(s.size());
  out += ':';
  out += s;
}

void put_state(std::string& out, const InputState& st) {
  out += 'I';
  out += std::to_string(st.inputs.size());
  for (const auto& in : st.inputs) put(out, in);
  out += st.bound ? 'b' + std::to_string(*st.bound) : std::string("u");
}

}  // namespace

ValueType value_type(SymbolId s) { return Grammar::flashfill().symbol(s).result; }

Spec make_string_spec(
    const std::vector<std::pair<std::vector<std::string>, std::string>>& examples,
    std::vector<InputState> unlabeled) {
  Spec spec;
  spec.type = ValueType::String;
  for (const auto& [inputs, output] : examples) {
    Constraint c;
    c.state.inputs = inputs;
    c.strings = {output};
    spec.constraints.push_back(std::move(c));
  }
  spec.unlabeled = std::move(unlabeled);
  return spec;
}

void canonicalize(Spec& spec) {
  for (auto& c : spec.constraints) {
    sort_unique(c.strings);
    sort_unique(c.spans);
    sort_unique(c.positions);
  }
}

bool is_unsatisfiable(const Spec& spec) {
  if (spec.constraints.empty()) return true;
  for (const auto& c : spec.constraints) {
    switch (spec.type) {
      case ValueType::String:
        if (c.strings.empty()) return true;
        break;
      case ValueType::Span:
        if (c.spans.empty()) return true;
        break;
      case ValueType::Position:
        if (c.positions.empty()) return true;
        break;
    }
  }
  return false;
}

std::string spec_key(const Spec& spec) {
  std::string out;
  out += static_cast<char>('0' + static_cast<int>(spec.type));
  for (const auto& c : spec.constraints) {
    put_state(out, c.state);
    out += 'V';
    switch (spec.type) {
      case ValueType::String:
        for (const auto& s : c.strings) put(out, s);
        break;
      case ValueType::Span:
        for (const auto& s : c.spans) {
          out += std::to_string(s.start) + ',' + std::to_string(s.end) + ';';
        }
        break;
      case ValueType::Position:
        for (int p : c.positions) out += std::to_string(p) + ';';
        break;
    }
    out += '|';
  }
  out += 'U';
  for (const auto& st : spec.unlabeled) put_state(out, st);
  return out;
}

bool satisfies(const Program& p, const Spec& spec) {
  if (spec.constraints.empty()) return false;
  for (const auto& c : spec.constraints) {
    switch (spec.type) {
      case ValueType::String: {
        auto out = eval_program(p, c.state);
        if (!out || !std::binary_search(c.strings.begin(), c.strings.end(), *out)) return false;
        break;
      }
      case ValueType::Span: {
        auto span = resolve_range(p, c.state.x());
        if (!span || !std::binary_search(c.spans.begin(), c.spans.end(), *span)) return false;
        break;
      }
      case ValueType::Position: {
        auto pos = resolve_position(p, c.state.x());
        if (!pos || !std::binary_search(c.positions.begin(), c.positions.end(), *pos)) {
          return false;
        }
        break;
      }
    }
  }
  return true;
}

}  // namespace ngds
