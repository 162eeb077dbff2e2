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

#include "ngds/ranking.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ngds {

RankingWeights RankingWeights::defaults() {
  RankingWeights w;
  for (TokenId t : all_tokens()) {
    w.token_specificity[static_cast<std::size_t>(t)] = default_token_specificity(t);
  }
  return w;
}

RankingWeights RankingWeights::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ranking weights: " + path);
  const nlohmann::json j = nlohmann::json::parse(in);
  RankingWeights w = defaults();
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("concat", w.concat);
  get("const_str", w.const_str);
  get("const_char", w.const_char);
  get("substr", w.substr);
  get("pair", w.pair);
  get("regex_occ", w.regex_occ);
  get("regex_pos", w.regex_pos);
  get("abs_pos", w.abs_pos);
  get("empty_output", w.empty_output);
  if (j.contains("token_specificity")) {
    for (const auto& [name, value] : j.at("token_specificity").items()) {
      bool found = false;
      for (TokenId t : all_tokens()) {
        if (token_name(t) == name) {
          w.token_specificity[static_cast<std::size_t>(t)] = value.get<double>();
          found = true;
        }
      }
      if (!found) throw std::runtime_error("unknown token in ranking weights: " + name);
    }
  }
  return w;
}

double Ranker::structural(const Program& p) const {
  const auto& w = weights_;
  const auto spec = [&](TokenId t) { return w.token_specificity[static_cast<std::size_t>(t)]; };
  switch (p.kind()) {
    case NodeKind::Concat:
      return w.concat + structural(p.child(0)) + structural(p.child(1));
    case NodeKind::ConstStr:
      return w.const_str + w.const_char * static_cast<double>(p.literal().size());
    case NodeKind::Substr:
      return w.substr + structural(p.child(0));
    case NodeKind::Pair:
      return w.pair + structural(p.child(0)) + structural(p.child(1));
    case NodeKind::RegexOcc:
      return w.regex_occ + spec(p.token());
    case NodeKind::AbsPos:
      return w.abs_pos;
    case NodeKind::RegexPos:
      return w.regex_pos + spec(p.left_token()) + spec(p.right_token());
  }
  return 0.0;
}

double Ranker::rank(const Program& p, std::span<const InputState> states) const {
  double score = structural(p);
  const NodeKind k = p.kind();
  if (k != NodeKind::Concat && k != NodeKind::ConstStr && k != NodeKind::Substr) return score;
  for (const auto& st : states) {
    auto out = eval_program(p, st);
    if (!out || out->empty()) score += weights_.empty_output;
  }
  return score;
}

double Ranker::score_for(const Program& p, const Spec& spec) const {
  if (spec.type != ValueType::String) return structural(p);
  return rank(p, spec.unlabeled);
}

}  // namespace ngds
