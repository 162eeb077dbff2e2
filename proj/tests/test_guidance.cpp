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

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "ngds/spec.hpp"

namespace ngds {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProgramSet set_of(std::vector<double> scores, const std::string& tag) {
  ProgramSet s;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const std::string text = tag + std::to_string(i);
    s.add({Program::const_str(text), scores[i], text});
  }
  s.finalize(static_cast<int>(scores.size()));
  return s;
}

// Branch i yields the programs in `yields[i]`; calls are logged.
struct FakeBranches {
  std::vector<std::vector<double>> yields;
  std::vector<std::pair<std::size_t, int>> calls;

  BranchLearner learner() {
    return [this](std::size_t i, int k) {
      calls.emplace_back(i, k);
      return set_of(yields[i], "b" + std::to_string(i) + "_").top(k);
    };
  }
};

std::vector<double> scores_of(const ProgramSet& s) {
  std::vector<double> out;
  for (const auto& e : s.entries()) out.push_back(e.score);
  return out;
}

const Spec& email_spec() {
  static const Spec s =
      make_string_spec({{{"alice"}, "alice@iclr.org"}, {{"bob"}, "bob@iclr.org"}});
  return s;
}

std::vector<std::string> texts(const ProgramSet& s) {
  std::vector<std::string> out;
  for (const auto& e : s.entries()) out.push_back(e.text);
  return out;
}

TEST(BranchAndBound, SecondBranchGetsReducedTarget) {
  FakeBranches f{{{0.8, 0.4}, {0.45, 0.3}}, {}};
  const double s[] = {0.9, 0.5};
  const ControllerResult r = bnb_controller(s, 2, f.learner());
  EXPECT_EQ(f.calls, (std::vector<std::pair<std::size_t, int>>{{0, 2}, {1, 1}}));
  EXPECT_EQ(r.explored, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(scores_of(r.programs), (std::vector<double>{0.8, 0.45}));
}

TEST(BranchAndBound, StopsWhenTargetIsMet) {
  FakeBranches f{{{0.8}, {0.95}}, {}};
  const double s[] = {0.9, 0.5};
  const ControllerResult r = bnb_controller(s, 1, f.learner());
  EXPECT_EQ(r.explored, (std::vector<std::size_t>{0}));
  EXPECT_EQ(f.calls.size(), 1u);
  EXPECT_EQ(scores_of(r.programs), (std::vector<double>{0.8}));
}

TEST(BranchAndBound, OrdersByPrediction) {
  FakeBranches f{{{1.0}, {2.0}, {3.0}}, {}};
  const double s[] = {0.1, 0.7, 0.4};
  const ControllerResult r = bnb_controller(s, 3, f.learner());
  EXPECT_EQ(r.explored, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(BranchAndBound, PermutationInvariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 4;
    std::vector<double> scores(n);
    std::vector<std::vector<double>> yields(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = u(rng);
      for (int j = 0; j < 3; ++j) yields[i].push_back(u(rng));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pscores(n);
    std::vector<std::vector<double>> pyields(n);
    for (std::size_t i = 0; i < n; ++i) {
      pscores[i] = scores[perm[i]];
      pyields[i] = yields[perm[i]];
    }
    FakeBranches a{yields, {}}, b{pyields, {}};
    const int k = 1 + trial % 3;
    const ControllerResult ra = bnb_controller(scores, k, a.learner());
    const ControllerResult rb = bnb_controller(pscores, k, b.learner());
    EXPECT_EQ(scores_of(ra.programs), scores_of(rb.programs));
    ASSERT_EQ(ra.explored.size(), rb.explored.size());
    for (std::size_t i = 0; i < ra.explored.size(); ++i) EXPECT_EQ(ra.explored[i], perm[rb.explored[i]]);
  }
}

TEST(Threshold, Band) {
  FakeBranches f{{{1}, {2}, {3}}, {}};
  const double s[] = {0.9, 0.85, 0.3};
  EXPECT_EQ(threshold_controller(s, 0.1, 1, f.learner()).explored,
            (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(threshold_controller(s, 0.0, 1, f.learner()).explored, (std::vector<std::size_t>{0}));
  EXPECT_EQ(threshold_controller(s, kInf, 1, f.learner()).explored,
            (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Threshold, ArgmaxTakesFirstOfTies) {
  FakeBranches f{{{1}, {2}}, {}};
  const double s[] = {0.5, 0.5};
  EXPECT_EQ(threshold_controller(s, 0.0, 1, f.learner()).explored, (std::vector<std::size_t>{0}));
}

TEST(Threshold, MonotoneInTheta) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(5);
    for (double& x : s) x = u(rng);
    if (trial % 5 == 0) s[trial % 3] = kNegInf;
    FakeBranches f{std::vector<std::vector<double>>(5, {0.0}), {}};
    std::vector<std::size_t> prev;
    for (double theta : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0, kInf}) {
      const auto now = threshold_controller(s, theta, 1, f.learner()).explored;
      EXPECT_TRUE(std::includes(now.begin(), now.end(), prev.begin(), prev.end()));
      prev = now;
    }
    EXPECT_EQ(prev.size(), 5u);
  }
}

TEST(Controller, Names) {
  EXPECT_EQ(parse_controller("bnb"), ControllerKind::BranchAndBound);
  EXPECT_EQ(parse_controller("threshold"), ControllerKind::Threshold);
  EXPECT_EQ(parse_controller("bb0.2"), ControllerKind::BnBWithThresholdPredecessor);
  EXPECT_THROW(parse_controller("BnB"), std::invalid_argument);
  EXPECT_EQ(controller_name(ControllerConfig::threshold(0.2)), "threshold(0.2)");
  EXPECT_EQ(controller_name(ControllerConfig::threshold(0)), "threshold(0)");
  EXPECT_EQ(controller_name(ControllerConfig::bnb()), "bnb");
  EXPECT_EQ(controller_name(ControllerConfig::bb02()), "bb0.2");
}

TEST(Oracle, EmailRootExploresOnlyConcat) {
  const Scorer oracle = oracle_scorer();
  const auto prods = Grammar::flashfill().productions(SymbolId::Transform);
  std::vector<double> s;
  for (ProductionId p : prods) s.push_back(oracle.predict(p, email_spec()));
  EXPECT_EQ(s[0], kNegInf);  // transform := atom does not apply

  Engine engine;
  const ControllerResult r = bnb_controller(s, 1, [&](std::size_t i, int k) {
    return engine.learn_production(prods[i], email_spec(), k);
  });
  ASSERT_EQ(r.explored.size(), 1u);
  EXPECT_EQ(prods[r.explored[0]], ProductionId::TransformConcat);
  EXPECT_EQ(r.programs.front().score, s[1]);
}

TEST(Oracle, GuidedMatchesBaseline) {
  const std::vector<Spec> specs = {
      email_spec(),
      make_string_spec({{{"(612) 8729128"}, "612-872-9128"}}),
      make_string_spec({{{"Yann LeCunn"}, "Y LeCunn"}, {{"Hugo Larochelle"}, "H Larochelle"}}),
  };
  for (const Spec& spec : specs) {
    SearchStats base_stats, guided_stats;
    const ProgramSet base = learn(SymbolId::Transform, spec, 1, &base_stats);
    const ProgramSet guided = learn_ngds(SymbolId::Transform, spec, 1, ModelAssignment::oracle(),
                                         ControllerConfig::bnb(), &guided_stats);
    EXPECT_EQ(texts(guided), texts(base));
    EXPECT_LT(guided_stats.branches_explored, base_stats.branches_explored);
    EXPECT_EQ(guided_stats.fallbacks, 0);
  }
}

TEST(Limits, InfiniteThetaIsBaseline) {
  // An arbitrary (badly wrong) predictor cannot matter when every branch is kept.
  Scorer noisy;
  noisy.predict = [](ProductionId p, const Spec& s) {
    return static_cast<double>((static_cast<int>(p) * 7 + spec_key(s).size()) % 11);
  };
  ModelAssignment a;
  for (SymbolId sym : {SymbolId::Transform, SymbolId::Pp, SymbolId::Pos}) a.assign(sym, noisy);
  for (const Spec& spec : {email_spec(), make_string_spec({{{"a1b22"}, "22"}})}) {
    SearchStats stats;
    const ProgramSet guided =
        learn_ngds(SymbolId::Transform, spec, 5, a, ControllerConfig::threshold(kInf), &stats);
    EXPECT_EQ(texts(guided), texts(learn(SymbolId::Transform, spec, 5)));
    EXPECT_EQ(stats.branches_explored, stats.branches_total);
  }
}

TEST(Limits, ZeroThetaIsArgmax) {
  SearchStats stats;
  learn_ngds(SymbolId::Transform, email_spec(), 1, ModelAssignment::oracle(),
             ControllerConfig::threshold(0), &stats);
  EXPECT_GT(stats.guided_decisions, 0);
  EXPECT_EQ(stats.guided_branches, stats.guided_decisions);
}

TEST(Fallback, AllBranchesBelowFloor) {
  Scorer hopeless;
  hopeless.predict = [](ProductionId, const Spec&) { return -1e9; };
  hopeless.prune_line = -1e6;
  ModelAssignment a;
  a.assign(SymbolId::Transform, hopeless);
  SearchStats stats;
  const ProgramSet guided =
      learn_ngds(SymbolId::Transform, email_spec(), 1, a, ControllerConfig::threshold(0), &stats);
  EXPECT_GT(stats.fallbacks, 0);
  EXPECT_EQ(texts(guided), texts(learn(SymbolId::Transform, email_spec(), 1)));
}

// A scorer that always favours Concat at the root commits to it and misses
// the plain extraction the baseline finds.
TEST(ErrorAnalysis, MiscalibratedConcatPreference) {
  const Spec spec = make_string_spec(
      {{{"41.7114830017,-91.41233825683,41.60762786865,-91.63739013671"}, "41.7114830017"}});
  Scorer concat_lover;
  concat_lover.predict = [](ProductionId p, const Spec&) {
    return p == ProductionId::TransformConcat ? 100.0 : -100.0;
  };
  ModelAssignment a;
  a.assign(SymbolId::Transform, concat_lover);
  const ProgramSet guided =
      learn_ngds(SymbolId::Transform, spec, 1, a, ControllerConfig::threshold(0));
  const ProgramSet base = learn(SymbolId::Transform, spec, 1);
  ASSERT_FALSE(guided.empty());
  ASSERT_FALSE(base.empty());
  EXPECT_EQ(base.front().program.kind(), NodeKind::Substr);
  EXPECT_EQ(guided.front().program.kind(), NodeKind::Concat);
  EXPECT_LT(guided.best_score(), base.best_score());
  const InputState other{{"42.0538899,-87.6756287,41.8781136,-87.6297982"}, std::nullopt};
  EXPECT_EQ(eval_program(base.front().program, other), "42.0538899");
}

}  // namespace
}  // namespace ngds
