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

// Top-down deductive search. Learn(N, spec) unites the results of every
// production of N; each production reduces its spec through witness
// functions to specs on its parameters, learns those recursively and
// combines the sub-results best-first.

#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ngds/dsl.hpp"
#include "ngds/ranking.hpp"
#include "ngds/spec.hpp"

namespace ngds {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ScoredProgram {
  Program program;
  double score = 0.0;
  std::string text;  // canonical print, the tie-breaker
};

/// Programs ordered by (score desc, text asc).
class ProgramSet {
 public:
  /// Internal sets keep programs tied with the k-th score, up to this many
  /// entries, so tie-breaking stays exact after combination.
  static constexpr std::size_t kTieCap = 64;

  const std::vector<ScoredProgram>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const ScoredProgram& front() const { return entries_.front(); }
  double best_score() const { return entries_.empty() ? kNegInf : entries_.front().score; }

  void add(ScoredProgram p) { entries_.push_back(std::move(p)); }
  void append(const ProgramSet& other);

  /// Sorts, removes duplicates and keeps the top k plus programs tied with
  /// the k-th one (bounded by kTieCap).
  void finalize(int k);
  /// Exactly the top k of an already finalized set.
  ProgramSet top(int k) const;

 private:
  std::vector<ScoredProgram> entries_;
};

struct SearchStats {
  long branches_explored = 0;
  long branches_total = 0;
  long node_expansions = 0;
  double wall_seconds = 0.0;
  // Guided decisions only.
  long guided_decisions = 0;
  long guided_branches = 0;
  long fallbacks = 0;

  SearchStats& operator+=(const SearchStats& o);
};

class Engine;

/// Hook for branch selection at symbols with several productions.
class BranchPolicy {
 public:
  virtual ~BranchPolicy() = default;
  /// Returns nullopt to let the engine explore every production.
  virtual std::optional<ProgramSet> decide(Engine& engine, SymbolId symbol, const Spec& spec,
                                           int k) = 0;
};

/// Called at every decision explored in full, with its nesting depth (1 at
/// the root) and one set per production.
using DecisionObserver =
    std::function<void(SymbolId, int depth, const Spec&, std::span<const ProductionId>,
                       const std::vector<ProgramSet>&)>;

class Engine {
 public:
  explicit Engine(Ranker ranker = Ranker(), BranchPolicy* policy = nullptr);

  ProgramSet learn(SymbolId symbol, const Spec& spec, int k);
  ProgramSet learn_production(ProductionId production, const Spec& spec, int k);
  /// Explores every production of `symbol`, bypassing the policy.
  ProgramSet learn_all(SymbolId symbol, const Spec& spec, int k);

  /// Top-k transform programs for a string spec; times the search.
  ProgramSet synthesize(const Spec& spec, int k);

  const Ranker& ranker() const { return ranker_; }
  SearchStats& stats() { return stats_; }
  void set_observer(DecisionObserver observer) { observer_ = std::move(observer); }
  /// Number of symbol learns on the current call stack.
  int depth() const { return depth_; }
  const TokenIndex& index(const std::string& x);

 private:
  ProgramSet learn_transform_concat(const Spec& spec, int k);
  ProgramSet learn_atom_substr(const Spec& spec, int k);
  ProgramSet learn_pp_pair(const Spec& spec, int k);
  ProgramSet learn_pp_regex_occ(const Spec& spec);
  ProgramSet learn_pos_abs(const Spec& spec);
  ProgramSet learn_pos_regex(const Spec& spec);
  ScoredProgram scored(Program p, const Spec& spec) const;

  Ranker ranker_;
  BranchPolicy* policy_;
  DecisionObserver observer_;
  SearchStats stats_;
  int depth_ = 0;
  std::unordered_map<std::string, ProgramSet> symbol_memo_;
  std::unordered_map<std::string, ProgramSet> production_memo_;
  std::unordered_map<std::string, std::unique_ptr<TokenIndex>> indices_;
};

/// Convenience wrapper around a fresh baseline engine.
ProgramSet learn(SymbolId symbol, const Spec& spec, int k, SearchStats* stats = nullptr,
                 const Ranker& ranker = Ranker());

/// Best h-score over programs derived through `production`, or kNegInf.
double best_score(ProductionId production, const Spec& spec, const Ranker& ranker = Ranker());

/// Size-bounded search: element s holds the best program of exactly AST
/// size s (s <= max_size), if any. Same witness decomposition as Engine.
std::vector<std::optional<ScoredProgram>> learn_by_size(SymbolId symbol, const Spec& spec,
                                                        int max_size,
                                                        const Ranker& ranker = Ranker());

}  // namespace ngds
