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

// ngds: synthesize, collect traces, train score models, evaluate, repl.
//
// Exit codes: 0 success, 1 usage or environment error, 2 no program found.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ngds/corpus.hpp"
#include "ngds/guidance.hpp"
#include "ngds/score_model.hpp"
#include "ngds/search.hpp"
#include "ngds/syntax.hpp"

#ifndef NGDS_DEFAULT_CORPUS
#define NGDS_DEFAULT_CORPUS "data/corpus.json"
#endif

namespace fs = std::filesystem;
using namespace ngds;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kUnsat = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string ranking;
  std::string model_dir = "models";
  std::string controller = "bnb";
  double theta = 0.2;
  std::vector<std::string> models;
  int k = 1;
  std::uint64_t seed = 0;
  double gate_ms = 500.0;
  long gate_expansions = 100;
  std::string out;
};

std::string default_corpus() {
  if (const char* env = std::getenv("NGDS_CORPUS"); env && *env) return env;
  return NGDS_DEFAULT_CORPUS;
}

Ranker make_ranker(const Options& o) {
  if (o.ranking.empty()) return Ranker();
  if (!fs::exists(o.ranking)) throw UsageError("ranking file not found: " + o.ranking);
  return Ranker(RankingWeights::load(o.ranking));
}

std::vector<Task> corpus_tasks(const Options& o) {
  if (!fs::exists(o.corpus))
    throw UsageError("corpus not found: " + o.corpus + " (set --corpus or NGDS_CORPUS)");
  return load_tasks(o.corpus);
}

SymbolId model_symbol(const std::string& name) {
  if (name == "t1") return SymbolId::Transform;
  if (name == "pp") return SymbolId::Pp;
  if (name == "pos") return SymbolId::Pos;
  throw UsageError("unknown model '" + name + "' (t1, pp, pos)");
}

std::string model_path(const Options& o, const std::string& name) {
  return (fs::path(o.model_dir) / (name + ".model")).string();
}

ControllerConfig controller_config(const Options& o) {
  ControllerConfig c;
  try {
    c.kind = parse_controller(o.controller);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  c.theta = c.kind == ControllerKind::BranchAndBound ? 0.0 : o.theta;
  if (c.theta < 0.0) throw UsageError("--theta must be non-negative");
  return c;
}

ModelAssignment load_assignment(const Options& o) {
  ModelAssignment a;
  for (const std::string& name : o.models) {
    const std::string path = model_path(o, name);
    if (!fs::exists(path))
      throw UsageError("model not found: " + path + " (run `ngds train --models " + name + "`)");
    a.assign(model_symbol(name), model_scorer(ScoreModel::load(path)));
  }
  return a;
}

std::string engine_label(const Options& o) {
  std::string names;
  for (const std::string& m : o.models) {
    if (!names.empty()) names += "+";
    names += m == "t1" ? "T1" : m == "pp" ? "PP" : "POS";
  }
  return "NGDS(" + names + ", " + controller_name(controller_config(o)) + ")";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

// --- synth -----------------------------------------------------------------

std::vector<std::string> split_inputs(const std::string& s, const std::string& sep) {
  if (sep.empty()) return {s};
  std::vector<std::string> out;
  std::size_t at = 0;
  for (std::size_t next; (next = s.find(sep, at)) != std::string::npos; at = next + sep.size())
    out.push_back(s.substr(at, next - at));
  out.push_back(s.substr(at));
  return out;
}

ProgramSet run_search(const Options& o, const Spec& spec, SearchStats* stats) {
  const Ranker ranker = make_ranker(o);
  if (o.models.empty()) {
    Engine engine(ranker);
    ProgramSet out = engine.synthesize(spec, o.k);
    if (stats) *stats = engine.stats();
    return out;
  }
  GuidedPolicy policy(load_assignment(o), controller_config(o));
  Engine engine(ranker, &policy);
  ProgramSet out = engine.synthesize(spec, o.k);
  if (stats) *stats = engine.stats();
  return out;
}

void print_program_outputs(const ScoredProgram& p, const std::vector<std::vector<std::string>>& inputs,
                           const std::vector<std::string>* expected) {
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto out = eval_program(p.program, InputState{inputs[i], std::nullopt});
    std::cout << "    " << quote_string(inputs[i].front());
    for (std::size_t j = 1; j < inputs[i].size(); ++j) std::cout << ", " << quote_string(inputs[i][j]);
    std::cout << " -> " << (out ? quote_string(*out) : std::string("<error>"));
    if (expected && i < expected->size())
      std::cout << ((out && *out == (*expected)[i]) ? "  ok" : "  MISMATCH");
    std::cout << "\n";
  }
}

int cmd_synth(const Options& o, const std::vector<std::string>& raw, const std::string& sep,
              const std::vector<std::string>& apply) {
  if (raw.empty() || raw.size() % 2) throw UsageError("--example takes INPUT OUTPUT pairs");
  std::vector<std::pair<std::vector<std::string>, std::string>> examples;
  for (std::size_t i = 0; i < raw.size(); i += 2)
    examples.emplace_back(split_inputs(raw[i], sep), raw[i + 1]);
  for (const auto& e : examples)
    if (e.first.size() != examples.front().first.size())
      throw UsageError("every example needs the same number of inputs");
  const Spec spec = make_string_spec(examples);
  SearchStats stats;
  const ProgramSet result = run_search(o, spec, &stats);
  if (result.empty()) {
    std::cout << "no program satisfies the examples\n";
    return kUnsat;
  }
  std::vector<std::vector<std::string>> inputs;
  std::vector<std::string> expected;
  for (const auto& e : examples) {
    inputs.push_back(e.first);
    expected.push_back(e.second);
  }
  int rank = 1;
  for (const ScoredProgram& p : result.entries()) {
    std::cout << "#" << rank++ << "  h = " << p.score << "\n  " << p.text << "\n";
    print_program_outputs(p, inputs, &expected);
  }
  if (!apply.empty()) {
    std::cout << "top-1 on new inputs:\n";
    std::vector<std::vector<std::string>> extra;
    for (const std::string& a : apply) extra.push_back(split_inputs(a, sep));
    print_program_outputs(result.front(), extra, nullptr);
  }
  std::cout << "node expansions " << stats.node_expansions << ", branches " << stats.branches_explored
            << "/" << stats.branches_total << "\n";
  return kOk;
}

// --- trace / train / eval ----------------------------------------------------

int cmd_trace(const Options& o, int rotations) {
  const std::vector<Task> tasks = corpus_tasks(o);
  const Ranker ranker = make_ranker(o);
  std::vector<TraceRecord> records = collect_traces(tasks_in(tasks, Split::Train), ranker, rotations);
  const std::vector<TraceRecord> val = collect_traces(tasks_in(tasks, Split::Validation), ranker);
  records.insert(records.end(), val.begin(), val.end());
  const std::string out = o.out.empty() ? "traces.jsonl" : o.out;
  write_traces(out, records);
  std::cout << "wrote " << records.size() << " records to " << out << "\n";
  return kOk;
}

int cmd_train(const Options& o, const std::string& traces, const Hyperparams& base) {
  if (!fs::exists(traces)) throw UsageError("traces not found: " + traces + " (run `ngds trace`)");
  const std::vector<Task> tasks = corpus_tasks(o);
  const std::vector<TraceRecord> records = read_traces(traces);
  const std::vector<TraceRecord> train_set = traces_in(records, tasks, Split::Train);
  const std::vector<TraceRecord> val_set = traces_in(records, tasks, Split::Validation);
  fs::create_directories(o.model_dir);
  Hyperparams hp = base;
  hp.seed = o.seed;
  const std::vector<std::string> names = o.models.empty() ? std::vector<std::string>{"t1"} : o.models;
  for (const std::string& name : names) {
    TrainingLog log;
    const ScoreModel model = train(train_set, val_set, model_symbol(name), hp, &log);
    model.save(model_path(o, name));
    std::ostringstream curve;
    curve << "epoch,train_loss,validation_loss\n";
    curve << std::setprecision(9) << "0,," << log.validation_loss.front() << "\n";
    for (std::size_t e = 0; e < log.train_loss.size(); ++e)
      curve << e + 1 << "," << log.train_loss[e] << "," << log.validation_loss[e + 1] << "\n";
    write_text((fs::path(o.model_dir) / (name + ".curve.csv")).string(), curve.str());
    std::vector<TraceRecord> held;
    for (const TraceRecord& r : val_set)
      if (r.symbol == model.symbol()) held.push_back(r);
    std::cout << name << ": best epoch " << log.best_epoch << " of " << log.train_loss.size()
              << ", validation loss " << log.validation_loss[log.best_epoch]
              << ", validation flip accuracy " << flip_accuracy(model, held) << " -> "
              << model_path(o, name) << "\n";
  }
  return kOk;
}

int cmd_eval(const Options& o, const std::string& split, const std::vector<std::string>& controllers,
             int repeats) {
  std::vector<Task> tasks = corpus_tasks(o);
  if (split != "all") {
    if (split == "train") tasks = tasks_in(tasks, Split::Train);
    else if (split == "validation") tasks = tasks_in(tasks, Split::Validation);
    else if (split == "test") tasks = tasks_in(tasks, Split::Test);
    else throw UsageError("--split must be train, validation, test or all");
  }
  EvalOptions opts;
  opts.k = o.k;
  opts.repeats = repeats;
  opts.gate_seconds = o.gate_ms / 1000.0;
  opts.gate_expansions = o.gate_expansions;
  opts.ranker = make_ranker(o);
  std::vector<EngineConfig> engines;
  if (!o.models.empty()) {
    const ModelAssignment assignment = load_assignment(o);
    for (const std::string& c : controllers) {
      Options oc = o;
      oc.controller = c;
      engines.push_back({engine_label(oc), assignment, controller_config(oc)});
    }
  }
  const MetricsReport report = evaluate(tasks, engines, opts);
  std::cout << report.table();
  if (!o.out.empty()) {
    write_text(o.out, report.to_json());
    std::cout << "metrics written to " << o.out << "\n";
  }
  return kOk;
}

// --- repl --------------------------------------------------------------------

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

// A value is a double-quoted string with \" and \\ escapes, or raw text.
std::vector<std::string> parse_values(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty() || s.front() != '"') return {s};
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t') {
      ++i;
      continue;
    }
    if (s[i] != '"') throw UsageError("expected a quoted string");
    std::string v;
    for (++i;; ++i) {
      if (i >= s.size()) throw UsageError("unterminated string");
      if (s[i] == '"') break;
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      v.push_back(s[i]);
    }
    ++i;
    out.push_back(v);
  }
  return out;
}

int cmd_repl(const Options& o) {
  std::vector<std::pair<std::vector<std::string>, std::string>> examples;
  std::optional<ScoredProgram> top;
  Options ro = o;
  ro.k = std::max(o.k, 3);
  std::cout << "enter examples as  input => output  (quote with \"...\"; several quoted inputs "
               "allowed)\ncommands: :apply <input>, :reset, :quit\n";
  std::string line;
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (line == ":quit" || line == ":q") return kOk;
      if (line == ":reset") {
        examples.clear();
        top.reset();
        continue;
      }
      if (line.rfind(":apply", 0) == 0) {
        if (!top) throw UsageError("no program yet");
        const auto inputs = parse_values(line.substr(6));
        const auto out = eval_program(top->program, InputState{inputs, std::nullopt});
        std::cout << (out ? quote_string(*out) : std::string("<error>")) << "\n";
        continue;
      }
      if (line.front() == ':') throw UsageError("unknown command " + line);
      const auto arrow = line.find("=>");
      if (arrow == std::string::npos) throw UsageError("expected  input => output");
      const auto inputs = parse_values(line.substr(0, arrow));
      const auto output = parse_values(line.substr(arrow + 2));
      if (output.size() != 1) throw UsageError("expected exactly one output");
      if (!examples.empty() && inputs.size() != examples.front().first.size())
        throw UsageError("input count differs from earlier examples");
      auto next = examples;
      next.emplace_back(inputs, output.front());
      const ProgramSet result = run_search(ro, make_string_spec(next), nullptr);
      examples = std::move(next);
      if (result.empty()) {
        top.reset();
        std::cout << "no program satisfies the examples\n";
        continue;
      }
      top = result.front();
      std::vector<std::vector<std::string>> all;
      for (const auto& e : examples) all.push_back(e.first);
      int rank = 1;
      const ProgramSet shown = result.top(3);
      for (const ScoredProgram& p : shown.entries()) {
        std::cout << "#" << rank++ << "  h = " << p.score << "  " << p.text << "\n";
        print_program_outputs(p, all, nullptr);
      }
    } catch (const UsageError& e) {
      std::cout << "error: " << e.what() << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural-guided deductive search over a FlashFill-style string DSL"};
  app.require_subcommand(1);
  Options o;
  o.corpus = default_corpus();

  auto common = [&](CLI::App* c) {
    c->add_option("--corpus", o.corpus, "Task corpus (default $NGDS_CORPUS or bundled)");
    c->add_option("--ranking", o.ranking, "Ranking weight table (JSON)");
    c->add_option("--k", o.k, "Programs to return")->check(CLI::PositiveNumber);
  };
  auto guided = [&](CLI::App* c) {
    c->add_option("--model-dir", o.model_dir, "Directory of t1/pp/pos model files");
    c->add_option("--models", o.models, "Score models to use: t1,pp,pos")->delimiter(',');
    c->add_option("--controller", o.controller, "threshold, bnb or bb0.2");
    c->add_option("--theta", o.theta, "Threshold band in label-scale units")
        ->check(CLI::NonNegativeNumber);
  };

  auto* synth = app.add_subcommand("synth", "Synthesize programs from examples");
  std::vector<std::string> raw_examples, apply;
  std::string sep;
  synth->add_option("-e,--example", raw_examples, "INPUT OUTPUT (repeatable)")
      ->type_size(2)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->required();
  synth->add_option("--input-sep", sep, "Split INPUT into several inputs on this string");
  synth->add_option("--apply", apply, "Run top-1 on these inputs");
  common(synth);
  guided(synth);

  auto* trace = app.add_subcommand("trace", "Collect search traces from the training split");
  int rotations = 4;
  trace->add_option("--rotations", rotations, "Example rotations per training task")
      ->check(CLI::PositiveNumber);
  trace->add_option("--out", o.out, "Output JSONL (default traces.jsonl)");
  common(trace);

  auto* train_cmd = app.add_subcommand("train", "Train score models on collected traces");
  std::string traces = "traces.jsonl";
  Hyperparams hp;
  train_cmd->add_option("--traces", traces, "Trace file");
  train_cmd->add_option("--seed", o.seed, "Random seed");
  train_cmd->add_option("--epochs", hp.max_epochs, "Maximum epochs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--patience", hp.patience, "Early-stopping patience")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--hidden", hp.hidden, "Hidden size")->check(CLI::PositiveNumber);
  common(train_cmd);
  guided(train_cmd);

  auto* eval = app.add_subcommand("eval", "Evaluate baseline and guided engines");
  std::string split = "test";
  std::vector<std::string> controllers;
  int repeats = 5;
  eval->add_option("--split", split, "train, validation, test or all");
  eval->add_option("--controllers", controllers, "Controllers to compare (overrides --controller)")
      ->delimiter(',');
  eval->add_option("--repeats", repeats, "Timed runs per task (median)")->check(CLI::PositiveNumber);
  eval->add_option("--gate-ms", o.gate_ms, "Wall-clock speed-up gate on baseline time (ms)");
  eval->add_option("--gate-expansions", o.gate_expansions,
                   "Expansion speed-up gate on baseline node expansions");
  eval->add_option("--out", o.out, "Metrics JSON output");
  common(eval);
  guided(eval);

  auto* repl = app.add_subcommand("repl", "Interactive example-by-example refinement");
  common(repl);
  guided(repl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return cmd_synth(o, raw_examples, sep, apply);
    if (*trace) return cmd_trace(o, rotations);
    if (*train_cmd) return cmd_train(o, traces, hp);
    if (*eval) {
      if (controllers.empty()) controllers.push_back(o.controller);
      return cmd_eval(o, split, controllers, repeats);
    }
    if (*repl) return cmd_repl(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
