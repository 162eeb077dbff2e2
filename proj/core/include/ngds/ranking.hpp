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

// The ranking function h. A program's score is a sum of per-node weights
// minus a penalty for every state on which it errs or outputs "". Higher is
// better.

#pragma once

#include <array>
#include <span>
#include <string>

#include "ngds/dsl.hpp"
#include "ngds/spec.hpp"

namespace ngds {

struct RankingWeights {
  double concat = -2.0;
  double const_str = -1.0;
  double const_char = -6.0;
  double substr = -2.0;
  double pair = 0.0;
  double regex_occ = -1.0;
  double regex_pos = -2.0;
  double abs_pos = -4.0;
  double empty_output = -50.0;
  std::array<double, kTokenCount> token_specificity{};

  /// Built-in table; identical to data/ranking.json.
  static RankingWeights defaults();
  /// Reads a JSON weight table. Missing fields keep their defaults.
  static RankingWeights load(const std::string& path);
};

class Ranker {
 public:
  Ranker() : weights_(RankingWeights::defaults()) {}
  explicit Ranker(RankingWeights weights) : weights_(weights) {}

  const RankingWeights& weights() const { return weights_; }

  /// Sum of node weights over the AST.
  double structural(const Program& p) const;

  /// h(P, states): structural score minus the empty-output penalty. Only
  /// string-valued programs are evaluated against states.
  double rank(const Program& p, std::span<const InputState> states) const;

  /// Score of a program found for `spec`: labeled constraints are satisfied
  /// by construction, so only unlabeled states can draw a penalty.
  double score_for(const Program& p, const Spec& spec) const;

 private:
  RankingWeights weights_;
};

}  // namespace ngds
