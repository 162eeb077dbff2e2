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

#include <benchmark/benchmark.h>

#include "ngds/guidance.hpp"
#include "ngds/score_model.hpp"
#include "ngds/search.hpp"
#include "ngds/spec.hpp"
#include "ngds/syntax.hpp"

namespace {

using namespace ngds;

constexpr const char* kPhone =
    "Concat(Substr(0, Pair(RegexPos(Char('('), Digits, 1), RegexPos(Digits, Char(')'), 1))), "
    "Concat(ConstStr(\"-\"), Concat(Substr(0, Pair(RegexPos(Char(' '), Digits, 1), AbsPos(-5))), "
    "Concat(ConstStr(\"-\"), Substr(0, Pair(AbsPos(-5), RegexPos(Digits, EndOfString, -1)))))))";

Spec phone_spec() { return make_string_spec({{{"(612) 8729128"}, "612-872-9128"}}); }

Spec names_spec() {
  return make_string_spec({{{"Yann LeCunn"}, "Y LeCunn"},
                           {{"Hugo Larochelle"}, "H Larochelle"},
                           {{"Tara Sainath"}, "T Sainath"}});
}

void BM_ParsePrint(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(print_program(parse_program(kPhone)));
}
BENCHMARK(BM_ParsePrint);

void BM_Eval(benchmark::State& state) {
  const Program p = parse_program(kPhone);
  const InputState in{{"(425) 7064550"}, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(eval_program(p, in));
}
BENCHMARK(BM_Eval);

void BM_LearnBaseline(benchmark::State& state, Spec spec) {
  const int k = static_cast<int>(state.range(0));
  SearchStats stats;
  for (auto _ : state) benchmark::DoNotOptimize(learn(SymbolId::Transform, spec, k, &stats));
  state.counters["expansions"] =
      benchmark::Counter(static_cast<double>(stats.node_expansions), benchmark::Counter::kAvgIterations);
}
BENCHMARK_CAPTURE(BM_LearnBaseline, phone, phone_spec())->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_LearnBaseline, names, names_spec())->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_LearnOracleBnB(benchmark::State& state) {
  const Spec spec = names_spec();
  const ModelAssignment oracle = ModelAssignment::oracle();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        learn_ngds(SymbolId::Transform, spec, 1, oracle, ControllerConfig::bnb()));
}
BENCHMARK(BM_LearnOracleBnB)->Unit(benchmark::kMillisecond);

void BM_ModelPredict(benchmark::State& state) {
  Hyperparams hp;
  hp.hidden = static_cast<int>(state.range(0));
  const ScoreModel m = ScoreModel::random(SymbolId::Transform, hp);
  const Spec spec = names_spec();
  for (auto _ : state) benchmark::DoNotOptimize(m.predict(ProductionId::TransformConcat, spec));
}
BENCHMARK(BM_ModelPredict)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
