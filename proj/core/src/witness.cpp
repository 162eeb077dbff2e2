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

#include <algorithm>

namespace ngds {

namespace {

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<std::string> witness_concat_prefix(const std::vector<std::string>& psi) {
  std::vector<std::string> out;
  for (const auto& v : psi) {
    for (std::size_t n = 1; n < v.size(); ++n) out.push_back(v.substr(0, n));
  }
  sort_unique(out);
  return out;
}

std::vector<std::string> witness_concat_suffix(const std::vector<std::string>& psi,
                                               std::string_view prefix) {
  std::vector<std::string> out;
  if (prefix.empty()) return out;
  for (const auto& v : psi) {
    if (v.size() > prefix.size() && std::string_view(v).substr(0, prefix.size()) == prefix) {
      out.push_back(v.substr(prefix.size()));
    }
  }
  sort_unique(out);
  return out;
}

std::vector<std::string> witness_conststr(const Spec& spec) {
  if (spec.constraints.empty()) return {};
  std::vector<std::string> acc = spec.constraints.front().strings;
  sort_unique(acc);
  for (std::size_t i = 1; i < spec.constraints.size() && !acc.empty(); ++i) {
    std::vector<std::string> next = spec.constraints[i].strings;
    sort_unique(next);
    std::vector<std::string> both;
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                          std::back_inserter(both));
    acc = std::move(both);
  }
  std::erase_if(acc, [](const std::string& s) { return s.empty(); });
  return acc;
}

std::map<int, std::vector<Span>> witness_substring(const InputState& state,
                                                   const std::vector<std::string>& psi) {
  std::map<int, std::vector<Span>> out;
  for (std::size_t i = 0; i < state.inputs.size(); ++i) {
    const std::string& x = state.inputs[i];
    std::vector<Span> spans;
    for (const auto& v : psi) {
      if (v.empty()) continue;
      for (auto at = x.find(v); at != std::string::npos; at = x.find(v, at + 1)) {
        spans.push_back({static_cast<int>(at), static_cast<int>(at + v.size())});
      }
    }
    if (spans.empty()) continue;
    sort_unique(spans);
    out.emplace(static_cast<int>(i), std::move(spans));
  }
  return out;
}

std::vector<int> witness_abs_position(std::string_view x, int p) {
  const int len = static_cast<int>(x.size());
  return {p - len - 1, p};
}

std::vector<RegexPosWitness> witness_regex_position(const TokenIndex& x, int p) {
  std::vector<RegexPosWitness> out;
  if (p < 0 || p > x.length()) return out;
  for (TokenId l : all_tokens()) {
    if (!x.ends_at(l, p)) continue;
    for (TokenId r : all_tokens()) {
      if (l == TokenId::Epsilon && r == TokenId::Epsilon) continue;
      if (!x.starts_at(r, p)) continue;
      const std::vector<int> bs = x.boundaries(l, r);
      const auto it = std::lower_bound(bs.begin(), bs.end(), p);
      const int from_left = static_cast<int>(it - bs.begin()) + 1;
      const int from_right = from_left - static_cast<int>(bs.size()) - 1;
      out.push_back({l, r, from_left});
      out.push_back({l, r, from_right});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RegexPosWitness> witness_regex_position(std::string_view x, int p) {
  return witness_regex_position(TokenIndex(x), p);
}

std::vector<RegexOccWitness> witness_regex_occurrence(const TokenIndex& x, Span span) {
  std::vector<RegexOccWitness> out;
  if (span.start >= span.end) return out;
  for (TokenId t : all_tokens()) {
    if (is_zero_width(t)) continue;
    const auto& occ = x.occurrences(t);
    const auto it = std::lower_bound(occ.begin(), occ.end(), span);
    if (it == occ.end() || *it != span) continue;
    const int from_left = static_cast<int>(it - occ.begin()) + 1;
    out.push_back({t, from_left});
    out.push_back({t, from_left - static_cast<int>(occ.size()) - 1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RegexOccWitness> witness_regex_occurrence(std::string_view x, Span span) {
  return witness_regex_occurrence(TokenIndex(x), span);
}

}  // namespace ngds
