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

#include "ngds/guidance.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace ngds {

namespace {

// Indices within `band` of the best score, in index order.
std::vector<std::size_t> band_of(std::span<const double> scores, double band) {
  std::vector<std::size_t> out;
  if (scores.empty()) return out;
  const auto best = std::max_element(scores.begin(), scores.end());
  if (band <= 0.0) return {static_cast<std::size_t>(best - scores.begin())};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double gap = scores[i] == *best ? 0.0 : *best - scores[i];
    if (gap <= band) out.push_back(i);
  }
  return out;
}

}  // namespace

ControllerKind parse_controller(const std::string& name) {
  if (name == "threshold") return ControllerKind::Threshold;
  if (name == "bnb") return ControllerKind::BranchAndBound;
  if (name == "bb0.2") return ControllerKind::BnBWithThresholdPredecessor;
  throw std::invalid_argument("unknown controller '" + name + "' (threshold, bnb, bb0.2)");
}

std::string controller_name(const ControllerConfig& config) {
  switch (config.kind) {
    case ControllerKind::Threshold: {
      std::string theta = std::to_string(config.theta);
      theta.erase(theta.find_last_not_of('0') + 1);
      if (theta.back() == '.') theta.pop_back();
      return "threshold(" + theta + ")";
    }
    case ControllerKind::BranchAndBound:
      return "bnb";
    case ControllerKind::BnBWithThresholdPredecessor:
      return "bb0.2";
  }
  return "?";
}

Scorer model_scorer(ScoreModel model) {
  auto shared = std::make_shared<const ScoreModel>(std::move(model));
  Scorer s;
  s.predict = [shared](ProductionId p, const Spec& spec) { return shared->predict(p, spec); };
  s.scale = shared->scale();
  s.prune_line = shared->prune_line();
  return s;
}

Scorer oracle_scorer(const Ranker& ranker) {
  Scorer s;
  s.predict = [ranker](ProductionId p, const Spec& spec) { return best_score(p, spec, ranker); };
  return s;
}

ModelAssignment ModelAssignment::oracle(const Ranker& ranker) {
  ModelAssignment a;
  for (SymbolId s : {SymbolId::Transform, SymbolId::Pp, SymbolId::Pos})
    a.assign(s, oracle_scorer(ranker));
  return a;
}

ControllerResult threshold_controller(std::span<const double> scores, double band, int k,
                                      const BranchLearner& learn) {
  ControllerResult r;
  r.explored = band_of(scores, band);
  for (std::size_t i : r.explored) r.programs.append(learn(i, k));
  r.programs.finalize(k);
  return r;
}

ControllerResult bnb_controller(std::span<const double> scores, int k,
                                const BranchLearner& learn) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  ControllerResult r;
  int remaining = k;
  for (std::size_t pos = 0; pos < order.size() && remaining > 0; ++pos) {
    const double next = pos + 1 < order.size() ? scores[order[pos + 1]] : kNegInf;
    const ProgramSet branch = learn(order[pos], remaining);
    r.explored.push_back(order[pos]);
    int above = 0;
    for (const ScoredProgram& p : branch.entries()) {
      if (p.score < next) continue;
      if (p.score > next) ++above;
      r.programs.add(p);
    }
    remaining -= above;
  }
  r.programs.finalize(k);
  return r;
}

std::optional<ProgramSet> GuidedPolicy::decide(Engine& engine, SymbolId symbol, const Spec& spec,
                                               int k) {
  const std::optional<Scorer>& scorer = assignment_.at(symbol);
  if (!scorer) return std::nullopt;
  const auto productions = Grammar::flashfill().productions(symbol);
  const std::size_t n = productions.size();
  if (n < 2) return std::nullopt;

  const double floor = config_.score_floor.value_or(scorer->prune_line);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = scorer->predict(productions[i], spec);
    scores[i] = s >= floor ? s : kNegInf;
  }
  SearchStats& stats = engine.stats();
  ++stats.guided_decisions;
  stats.branches_total += static_cast<long>(n);

  const double band = config_.theta * scorer->scale;
  auto learner = [&](std::size_t i, int kk) {
    return engine.learn_production(productions[i], spec, kk);
  };
  ControllerResult r;
  switch (config_.kind) {
    case ControllerKind::Threshold:
      r = threshold_controller(scores, band, k, learner);
      break;
    case ControllerKind::BranchAndBound:
      r = bnb_controller(scores, k, learner);
      break;
    case ControllerKind::BnBWithThresholdPredecessor: {
      const std::vector<std::size_t> kept = band_of(scores, band);
      std::vector<double> sub;
      for (std::size_t i : kept) sub.push_back(scores[i]);
      r = bnb_controller(sub, k, [&](std::size_t i, int kk) { return learner(kept[i], kk); });
      for (std::size_t& i : r.explored) i = kept[i];
      break;
    }
  }
  stats.branches_explored += static_cast<long>(r.explored.size());
  stats.guided_branches += static_cast<long>(r.explored.size());
  if (!r.programs.empty() || r.explored.size() == n) return std::move(r.programs);

  // Nothing survived a partial exploration: search this node in full once.
  ++stats.fallbacks;
  stats.branches_explored += static_cast<long>(n - r.explored.size());
  ProgramSet out;
  for (ProductionId p : productions) out.append(engine.learn_production(p, spec, k));
  out.finalize(k);
  return out;
}

ProgramSet learn_ngds(SymbolId symbol, const Spec& spec, int k, const ModelAssignment& assignment,
                      const ControllerConfig& config, SearchStats* stats, const Ranker& ranker) {
  GuidedPolicy policy(assignment, config);
  Engine engine(ranker, &policy);
  ProgramSet out = engine.learn(symbol, spec, k);
  if (stats) *stats += engine.stats();
  return out.top(k);
}

}  // namespace ngds
