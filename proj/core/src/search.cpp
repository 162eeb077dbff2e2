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

#include "ngds/search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <queue>
#include <set>

#include "ngds/syntax.hpp"
#include "ngds/witness.hpp"

namespace ngds {

namespace {

bool better(const ScoredProgram& a, const ScoredProgram& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.text < b.text;
}

template <typename T>
void intersect_into(std::vector<T>& acc, std::vector<T> next) {
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  std::vector<T> both;
  std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                        std::back_inserter(both));
  acc = std::move(both);
}

std::string memo_key(char tag, int id, int k, const Spec& spec) {
  std::string key;
  key += tag;
  key += std::to_string(id);
  key += '/';
  key += std::to_string(k);
  key += '/';
  key += spec_key(spec);
  return key;
}

// Pp and pos specs only see the bound string.
Constraint bound_constraint(const std::string& x) {
  Constraint c;
  c.state.inputs = {x};
  c.state.bound = 0;
  return c;
}

// Enumerates one value per constraint (the cross product), depth first.
template <typename T, typename Visit>
void for_each_tuple(const std::vector<std::vector<T>>& choices, Visit visit) {
  std::vector<T> tuple(choices.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == choices.size()) {
      visit(tuple);
      return;
    }
    for (const T& v : choices[i]) {
      tuple[i] = v;
      rec(i + 1);
    }
  };
  if (!choices.empty()) rec(0);
}

}  // namespace

void ProgramSet::append(const ProgramSet& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

void ProgramSet::finalize(int k) {
  std::sort(entries_.begin(), entries_.end(), better);
  entries_.erase(std::unique(entries_.begin(), entries_.end(),
                             [](const ScoredProgram& a, const ScoredProgram& b) {
                               return a.text == b.text;
                             }),
                 entries_.end());
  const auto limit = static_cast<std::size_t>(std::max(k, 0));
  if (entries_.size() <= limit) return;
  if (limit == 0) {
    entries_.clear();
    return;
  }
  std::size_t keep = limit;
  const double kth = entries_[limit - 1].score;
  while (keep < entries_.size() && keep < std::max(limit, kTieCap) &&
         entries_[keep].score == kth) {
    ++keep;
  }
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(keep), entries_.end());
}

ProgramSet ProgramSet::top(int k) const {
  ProgramSet out;
  const auto n = std::min(entries_.size(), static_cast<std::size_t>(std::max(k, 0)));
  out.entries_.assign(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
  branches_explored += o.branches_explored;
  branches_total += o.branches_total;
  node_expansions += o.node_expansions;
  wall_seconds += o.wall_seconds;
  guided_decisions += o.guided_decisions;
  guided_branches += o.guided_branches;
  fallbacks += o.fallbacks;
  return *this;
}

// ---------------------------------------------------------------------------

Engine::Engine(Ranker ranker, BranchPolicy* policy) : ranker_(std::move(ranker)), policy_(policy) {}

const TokenIndex& Engine::index(const std::string& x) {
  auto it = indices_.find(x);
  if (it == indices_.end()) it = indices_.emplace(x, std::make_unique<TokenIndex>(x)).first;
  return *it->second;
}

ScoredProgram Engine::scored(Program p, const Spec& spec) const {
  ScoredProgram s{p, ranker_.score_for(p, spec), print_program(p)};
  return s;
}

ProgramSet Engine::synthesize(const Spec& spec, int k) {
  const auto t0 = std::chrono::steady_clock::now();
  ProgramSet out = learn(SymbolId::Transform, spec, k).top(k);
  stats_.wall_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ProgramSet Engine::learn(SymbolId symbol, const Spec& spec, int k) {
  const std::string key = memo_key('S', static_cast<int>(symbol), k, spec);
  if (auto it = symbol_memo_.find(key); it != symbol_memo_.end()) return it->second;
  ++depth_;
  std::optional<ProgramSet> guided;
  if (policy_ && !is_unsatisfiable(spec)) guided = policy_->decide(*this, symbol, spec, k);
  ProgramSet out = guided ? std::move(*guided) : learn_all(symbol, spec, k);
  --depth_;
  symbol_memo_.emplace(key, out);
  return out;
}

ProgramSet Engine::learn_all(SymbolId symbol, const Spec& spec, int k) {
  const auto productions = Grammar::flashfill().productions(symbol);
  stats_.branches_total += static_cast<long>(productions.size());
  stats_.branches_explored += static_cast<long>(productions.size());
  std::vector<ProgramSet> sets;
  sets.reserve(productions.size());
  ProgramSet out;
  for (ProductionId p : productions) {
    sets.push_back(learn_production(p, spec, k));
    out.append(sets.back());
  }
  out.finalize(k);
  if (observer_) observer_(symbol, depth_, spec, productions, sets);
  return out;
}

ProgramSet Engine::learn_production(ProductionId production, const Spec& spec, int k) {
  const std::string key = memo_key('P', static_cast<int>(production), k, spec);
  if (auto it = production_memo_.find(key); it != production_memo_.end()) return it->second;
  ++stats_.node_expansions;
  ProgramSet out;
  if (!is_unsatisfiable(spec)) {
    switch (production) {
      case ProductionId::TransformAtom:
        out = learn(SymbolId::Atom, spec, k);
        break;
      case ProductionId::TransformConcat:
        out = learn_transform_concat(spec, k);
        break;
      case ProductionId::AtomConstStr:
        for (auto& s : witness_conststr(spec)) out.add(scored(Program::const_str(s), spec));
        break;
      case ProductionId::AtomSubstr:
        out = learn_atom_substr(spec, k);
        break;
      case ProductionId::PpPair:
        out = learn_pp_pair(spec, k);
        break;
      case ProductionId::PpRegexOcc:
        out = learn_pp_regex_occ(spec);
        break;
      case ProductionId::PosAbs:
        out = learn_pos_abs(spec);
        break;
      case ProductionId::PosRegex:
        out = learn_pos_regex(spec);
        break;
    }
  }
  out.finalize(k);
  production_memo_.emplace(key, out);
  return out;
}

namespace {

// Best-first enumeration of the cross product of two finalized sets, scored
// by `score_of`. Stops once k programs (plus ties) are out.
template <typename Make, typename Score>
void combine(const ProgramSet& a, const ProgramSet& b, double base, int k, Make make,
             Score score_of, ProgramSet& out) {
  if (a.empty() || b.empty()) return;
  using Item = std::pair<double, std::pair<std::size_t, std::size_t>>;
  auto cmp = [](const Item& x, const Item& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second > y.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto push = [&](std::size_t i, std::size_t j) {
    if (i >= a.size() || j >= b.size() || !seen.insert({i, j}).second) return;
    heap.push({base + a.entries()[i].score + b.entries()[j].score, {i, j}});
  };
  push(0, 0);
  std::size_t produced = 0;
  double kth = kNegInf;
  const auto limit = static_cast<std::size_t>(k);
  while (!heap.empty()) {
    const auto [estimate, ij] = heap.top();
    if (produced >= limit && (estimate < kth || produced >= ProgramSet::kTieCap)) break;
    heap.pop();
    Program p = make(a.entries()[ij.first].program, b.entries()[ij.second].program);
    out.add(score_of(std::move(p)));
    ++produced;
    if (produced == limit) kth = estimate;
    push(ij.first + 1, ij.second);
    push(ij.first, ij.second + 1);
  }
}

}  // namespace

ProgramSet Engine::learn_transform_concat(const Spec& spec, int k) {
  const auto& cs = spec.constraints;
  std::vector<std::vector<std::string>> prefixes;
  for (const auto& c : cs) {
    prefixes.push_back(witness_concat_prefix(c.strings));
    if (prefixes.back().empty()) return {};
  }
  ProgramSet out;
  const double base = ranker_.weights().concat;
  // Depth-first over one prefix per example, keeping only tuples some atom
  // could produce: equal constants, or substrings of one shared input.
  std::vector<std::string> tuple(cs.size());
  std::function<void(std::size_t, bool, std::vector<int>)> rec =
      [&](std::size_t i, bool equal, std::vector<int> inputs) {
        if (!equal && inputs.empty()) return;
        if (i == cs.size()) {
          Spec atom_spec{ValueType::String, {}, spec.unlabeled};
          Spec rest_spec{ValueType::String, {}, spec.unlabeled};
          for (std::size_t e = 0; e < cs.size(); ++e) {
            atom_spec.constraints.push_back({cs[e].state, {tuple[e]}, {}, {}});
            rest_spec.constraints.push_back(
                {cs[e].state, witness_concat_suffix(cs[e].strings, tuple[e]), {}, {}});
          }
          const ProgramSet atoms = learn(SymbolId::Atom, atom_spec, k);
          if (atoms.empty()) return;
          const ProgramSet rests = learn(SymbolId::Transform, rest_spec, k);
          combine(
              atoms, rests, base, k, [](const Program& a, const Program& r) {
                return Program::concat(a, r);
              },
              [&](Program p) { return scored(std::move(p), spec); }, out);
          return;
        }
        for (const auto& p : prefixes[i]) {
          tuple[i] = p;
          std::vector<int> keep;
          for (int in : inputs) {
            if (cs[i].state.inputs[in].find(p) != std::string::npos) keep.push_back(in);
          }
          rec(i + 1, equal && (i == 0 || p == tuple[0]), std::move(keep));
        }
      };
  std::vector<int> all(cs.front().state.inputs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  rec(0, true, all);
  return out;
}

ProgramSet Engine::learn_atom_substr(const Spec& spec, int k) {
  const auto& cs = spec.constraints;
  std::vector<std::map<int, std::vector<Span>>> per;
  for (const auto& c : cs) per.push_back(witness_substring(c.state, c.strings));
  ProgramSet out;
  for (const auto& [input, unused] : per.front()) {
    Spec pp{ValueType::Span, {}, {}};
    bool ok = true;
    for (std::size_t e = 0; e < cs.size() && ok; ++e) {
      auto it = per[e].find(input);
      if (it == per[e].end() || input >= static_cast<int>(cs[e].state.inputs.size())) {
        ok = false;
        break;
      }
      Constraint c = bound_constraint(cs[e].state.inputs[input]);
      c.spans = it->second;
      pp.constraints.push_back(std::move(c));
    }
    if (!ok) continue;
    const ProgramSet ranges = learn(SymbolId::Pp, pp, k);
    for (const auto& r : ranges.entries()) {
      out.add(scored(Program::substr(input, r.program), spec));
    }
  }
  return out;
}

ProgramSet Engine::learn_pp_pair(const Spec& spec, int k) {
  std::vector<std::vector<Span>> choices;
  for (const auto& c : spec.constraints) choices.push_back(c.spans);
  ProgramSet out;
  const double base = ranker_.weights().pair;
  for_each_tuple(choices, [&](const std::vector<Span>& spans) {
    Spec start{ValueType::Position, {}, {}};
    Spec end{ValueType::Position, {}, {}};
    for (std::size_t e = 0; e < spans.size(); ++e) {
      const std::string& x = spec.constraints[e].state.x();
      Constraint s = bound_constraint(x);
      s.positions = {spans[e].start};
      start.constraints.push_back(std::move(s));
      Constraint t = bound_constraint(x);
      t.positions = {spans[e].end};
      end.constraints.push_back(std::move(t));
    }
    const ProgramSet starts = learn(SymbolId::Pos, start, k);
    if (starts.empty()) return;
    const ProgramSet ends = learn(SymbolId::Pos, end, k);
    combine(
        starts, ends, base, k, [](const Program& a, const Program& b) {
          return Program::pair(a, b);
        },
        [&](Program p) { return scored(std::move(p), spec); }, out);
  });
  return out;
}

ProgramSet Engine::learn_pp_regex_occ(const Spec& spec) {
  std::optional<std::vector<RegexOccWitness>> acc;
  for (const auto& c : spec.constraints) {
    const TokenIndex& x = index(c.state.x());
    std::vector<RegexOccWitness> here;
    for (const Span& s : c.spans) {
      auto w = witness_regex_occurrence(x, s);
      here.insert(here.end(), w.begin(), w.end());
    }
    if (!acc) {
      std::sort(here.begin(), here.end());
      here.erase(std::unique(here.begin(), here.end()), here.end());
      acc = std::move(here);
    } else {
      intersect_into(*acc, std::move(here));
    }
    if (acc->empty()) return {};
  }
  ProgramSet out;
  for (const auto& w : *acc) out.add(scored(Program::regex_occ(w.token, w.occurrence), spec));
  return out;
}

ProgramSet Engine::learn_pos_abs(const Spec& spec) {
  std::optional<std::vector<int>> acc;
  for (const auto& c : spec.constraints) {
    std::vector<int> here;
    for (int p : c.positions) {
      auto w = witness_abs_position(c.state.x(), p);
      here.insert(here.end(), w.begin(), w.end());
    }
    if (!acc) {
      std::sort(here.begin(), here.end());
      here.erase(std::unique(here.begin(), here.end()), here.end());
      acc = std::move(here);
    } else {
      intersect_into(*acc, std::move(here));
    }
    if (acc->empty()) return {};
  }
  ProgramSet out;
  for (int k : *acc) out.add(scored(Program::abs_pos(k), spec));
  return out;
}

ProgramSet Engine::learn_pos_regex(const Spec& spec) {
  std::optional<std::vector<RegexPosWitness>> acc;
  for (const auto& c : spec.constraints) {
    const TokenIndex& x = index(c.state.x());
    std::vector<RegexPosWitness> here;
    for (int p : c.positions) {
      auto w = witness_regex_position(x, p);
      here.insert(here.end(), w.begin(), w.end());
    }
    if (!acc) {
      std::sort(here.begin(), here.end());
      here.erase(std::unique(here.begin(), here.end()), here.end());
      acc = std::move(here);
    } else {
      intersect_into(*acc, std::move(here));
    }
    if (acc->empty()) return {};
  }
  ProgramSet out;
  for (const auto& w : *acc) {
    out.add(scored(Program::regex_pos(w.left, w.right, w.occurrence), spec));
  }
  return out;
}

// ---------------------------------------------------------------------------

ProgramSet learn(SymbolId symbol, const Spec& spec, int k, SearchStats* stats,
                 const Ranker& ranker) {
  Engine engine(ranker);
  ProgramSet out = engine.learn(symbol, spec, k).top(k);
  if (stats) *stats += engine.stats();
  return out;
}

double best_score(ProductionId production, const Spec& spec, const Ranker& ranker) {
  Engine engine(ranker);
  return engine.learn_production(production, spec, 1).best_score();
}

// ---------------------------------------------------------------------------
// Size-bounded search. Scores are additive over the AST, so the best
// program of size s for a spec combines best children of matching sizes.

namespace {

using BySize = std::vector<std::optional<ScoredProgram>>;

class BoundedLearner {
 public:
  BoundedLearner(const Ranker& ranker, int max_size) : ranker_(ranker), max_(max_size) {}

  BySize learn(SymbolId symbol, const Spec& spec) {
    const std::string key = memo_key('B', static_cast<int>(symbol), 0, spec);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BySize out(max_ + 1);
    if (!is_unsatisfiable(spec)) {
      switch (symbol) {
        case SymbolId::Transform:
          merge(out, learn(SymbolId::Atom, spec));
          concat(spec, out);
          break;
        case SymbolId::Atom:
          for (auto& s : witness_conststr(spec)) offer(out, Program::const_str(s), spec);
          substr(spec, out);
          break;
        case SymbolId::Pp:
          pair(spec, out);
          regex_occ(spec, out);
          break;
        case SymbolId::Pos:
          positions(spec, out);
          break;
      }
    }
    memo_.emplace(key, out);
    return out;
  }

 private:
  void offer(BySize& out, Program p, const Spec& spec) {
    const int size = p.size();
    if (size > max_) return;
    ScoredProgram s{p, ranker_.score_for(p, spec), print_program(p)};
    auto& slot = out[size];
    if (!slot || better(s, *slot)) slot = std::move(s);
  }

  static void merge(BySize& out, const BySize& in) {
    for (std::size_t s = 0; s < in.size(); ++s) {
      if (in[s] && (!out[s] || better(*in[s], *out[s]))) out[s] = in[s];
    }
  }

  template <typename Make>
  void product(BySize& out, const BySize& a, const BySize& b, Make make, const Spec& spec) {
    for (int sa = 1; sa <= max_; ++sa) {
      if (!a[sa]) continue;
      for (int sb = 1; 1 + sa + sb <= max_; ++sb) {
        if (b[sb]) offer(out, make(a[sa]->program, b[sb]->program), spec);
      }
    }
  }

  void concat(const Spec& spec, BySize& out) {
    const auto& cs = spec.constraints;
    std::vector<std::vector<std::string>> prefixes;
    for (const auto& c : cs) prefixes.push_back(witness_concat_prefix(c.strings));
    for_each_tuple(prefixes, [&](const std::vector<std::string>& tuple) {
      Spec atom_spec{ValueType::String, {}, spec.unlabeled};
      Spec rest_spec{ValueType::String, {}, spec.unlabeled};
      for (std::size_t e = 0; e < cs.size(); ++e) {
        atom_spec.constraints.push_back({cs[e].state, {tuple[e]}, {}, {}});
        rest_spec.constraints.push_back(
            {cs[e].state, witness_concat_suffix(cs[e].strings, tuple[e]), {}, {}});
      }
      const BySize atoms = learn(SymbolId::Atom, atom_spec);
      const BySize rests = learn(SymbolId::Transform, rest_spec);
      product(out, atoms, rests, Program::concat, spec);
    });
  }

  void substr(const Spec& spec, BySize& out) {
    const auto& cs = spec.constraints;
    std::vector<std::map<int, std::vector<Span>>> per;
    for (const auto& c : cs) per.push_back(witness_substring(c.state, c.strings));
    for (const auto& [input, unused] : per.front()) {
      Spec pp{ValueType::Span, {}, {}};
      bool ok = true;
      for (std::size_t e = 0; e < cs.size() && ok; ++e) {
        auto it = per[e].find(input);
        if (it == per[e].end()) {
          ok = false;
          break;
        }
        Constraint c = bound_constraint(cs[e].state.inputs[input]);
        c.spans = it->second;
        pp.constraints.push_back(std::move(c));
      }
      if (!ok) continue;
      const BySize ranges = learn(SymbolId::Pp, pp);
      for (const auto& r : ranges) {
        if (r) offer(out, Program::substr(input, r->program), spec);
      }
    }
  }

  void pair(const Spec& spec, BySize& out) {
    std::vector<std::vector<Span>> choices;
    for (const auto& c : spec.constraints) choices.push_back(c.spans);
    for_each_tuple(choices, [&](const std::vector<Span>& spans) {
      Spec start{ValueType::Position, {}, {}};
      Spec end{ValueType::Position, {}, {}};
      for (std::size_t e = 0; e < spans.size(); ++e) {
        const std::string& x = spec.constraints[e].state.x();
        Constraint s = bound_constraint(x);
        s.positions = {spans[e].start};
        start.constraints.push_back(std::move(s));
        Constraint t = bound_constraint(x);
        t.positions = {spans[e].end};
        end.constraints.push_back(std::move(t));
      }
      product(out, learn(SymbolId::Pos, start), learn(SymbolId::Pos, end), Program::pair, spec);
    });
  }

  void regex_occ(const Spec& spec, BySize& out) {
    // Reuse the engine's witness plumbing through a throwaway engine.
    const ProgramSet found = engine_.learn_production(ProductionId::PpRegexOcc, spec, 1 << 20);
    for (const auto& e : found.entries()) {
      offer(out, e.program, spec);
    }
  }

  void positions(const Spec& spec, BySize& out) {
    for (ProductionId p : {ProductionId::PosAbs, ProductionId::PosRegex}) {
      const ProgramSet found = engine_.learn_production(p, spec, 1 << 20);
      for (const auto& e : found.entries()) {
        offer(out, e.program, spec);
      }
    }
  }

  const Ranker& ranker_;
  int max_;
  Engine engine_{ranker_};
  std::unordered_map<std::string, BySize> memo_;
};

}  // namespace

std::vector<std::optional<ScoredProgram>> learn_by_size(SymbolId symbol, const Spec& spec,
                                                        int max_size, const Ranker& ranker) {
  BoundedLearner learner(ranker, max_size);
  return learner.learn(symbol, spec);
}

}  // namespace ngds
