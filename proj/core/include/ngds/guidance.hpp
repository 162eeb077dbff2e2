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

// Neural-guided search: at a symbol with several productions and an
// assigned scorer, predict each branch's best score and let a controller
// pick the branches to learn.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ngds/score_model.hpp"
#include "ngds/search.hpp"

namespace ngds {

enum class ControllerKind { Threshold, BranchAndBound, BnBWithThresholdPredecessor };

struct ControllerConfig {
  ControllerKind kind = ControllerKind::BranchAndBound;
  /// Band width in units of the scorer's scale. 0 is pure argmax.
  double theta = 0.2;
  /// Predictions below this line count as -inf. nullopt uses the scorer's.
  std::optional<double> score_floor;

  static ControllerConfig threshold(double theta) {
    return {ControllerKind::Threshold, theta, std::nullopt};
  }
  static ControllerConfig bnb() { return {ControllerKind::BranchAndBound, 0.0, std::nullopt}; }
  static ControllerConfig bb02() {
    return {ControllerKind::BnBWithThresholdPredecessor, 0.2, std::nullopt};
  }
};

/// "threshold", "bnb" or "bb0.2" (case-sensitive); throws std::invalid_argument.
ControllerKind parse_controller(const std::string& name);
std::string controller_name(const ControllerConfig& config);

/// Predicts h-scores for the productions of one symbol.
struct Scorer {
  std::function<double(ProductionId, const Spec&)> predict;
  double scale = 1.0;
  double prune_line = kNegInf;
};

Scorer model_scorer(ScoreModel model);
/// Exact best scores from an independent baseline search.
Scorer oracle_scorer(const Ranker& ranker = Ranker());

/// At most one scorer per symbol; unassigned symbols are searched in full.
struct ModelAssignment {
  std::array<std::optional<Scorer>, kSymbolCount> scorers;

  ModelAssignment& assign(SymbolId symbol, Scorer scorer) {
    scorers[static_cast<std::size_t>(symbol)] = std::move(scorer);
    return *this;
  }
  const std::optional<Scorer>& at(SymbolId symbol) const {
    return scorers[static_cast<std::size_t>(symbol)];
  }
  /// Oracle scorers on transform, pp and pos.
  static ModelAssignment oracle(const Ranker& ranker = Ranker());
};

/// Learns branch i (in the caller's order) with target k.
using BranchLearner = std::function<ProgramSet(std::size_t branch, int k)>;

struct ControllerResult {
  ProgramSet programs;
  std::vector<std::size_t> explored;  // in exploration order
};

/// Learns the branches whose score is within `band` of the maximum; with
/// band 0 only the first maximal branch. Finalized to k.
ControllerResult threshold_controller(std::span<const double> scores, double band, int k,
                                      const BranchLearner& learn);

/// Branch and bound over branches sorted by score (ties by index). Branch i
/// keeps its programs scoring at least s[i+1]; k' drops by the number scoring
/// strictly above it. Finalized to k.
ControllerResult bnb_controller(std::span<const double> scores, int k,
                                const BranchLearner& learn);

class GuidedPolicy : public BranchPolicy {
 public:
  GuidedPolicy(ModelAssignment assignment, ControllerConfig config)
      : assignment_(std::move(assignment)), config_(config) {}

  std::optional<ProgramSet> decide(Engine& engine, SymbolId symbol, const Spec& spec,
                                   int k) override;

 private:
  ModelAssignment assignment_;
  ControllerConfig config_;
};

/// learn with every decision routed through a GuidedPolicy.
ProgramSet learn_ngds(SymbolId symbol, const Spec& spec, int k, const ModelAssignment& assignment,
                      const ControllerConfig& config, SearchStats* stats = nullptr,
                      const Ranker& ranker = Ranker());

}  // namespace ngds
