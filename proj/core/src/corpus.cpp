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

#include "ngds/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace ngds {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw FormatError(where + ": " + what);
}

const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name)) bad(where, std::string("missing field '") + name + "'");
  return obj.at(name);
}

std::string string_field(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name, where);
  if (!v.is_string()) bad(where, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const json& s : v) {
    if (!s.is_string()) bad(where, "expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::optional<Split> parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "validation") return Split::Validation;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::String:
      return "string";
    case ValueType::Span:
      return "span";
    case ValueType::Position:
      return "position";
  }
  return "?";
}

json state_json(const InputState& s) {
  json j = {{"inputs", s.inputs}};
  j["bound"] = s.bound ? json(*s.bound) : json(nullptr);
  return j;
}

InputState state_from(const json& j) {
  InputState s;
  s.inputs = j.at("inputs").get<std::vector<std::string>>();
  if (!j.at("bound").is_null()) s.bound = j.at("bound").get<std::size_t>();
  return s;
}

json spec_json(const Spec& spec) {
  json cs = json::array();
  for (const Constraint& c : spec.constraints) {
    json jc = state_json(c.state);
    switch (spec.type) {
      case ValueType::String:
        jc["strings"] = c.strings;
        break;
      case ValueType::Span: {
        json spans = json::array();
        for (const Span& s : c.spans) spans.push_back({s.start, s.end});
        jc["spans"] = spans;
        break;
      }
      case ValueType::Position:
        jc["positions"] = c.positions;
        break;
    }
    cs.push_back(jc);
  }
  json unlabeled = json::array();
  for (const InputState& s : spec.unlabeled) unlabeled.push_back(state_json(s));
  return {{"type", type_name(spec.type)}, {"constraints", cs}, {"unlabeled", unlabeled}};
}

Spec spec_from(const json& j) {
  Spec spec;
  const std::string type = j.at("type").get<std::string>();
  if (type == "string") {
    spec.type = ValueType::String;
  } else if (type == "span") {
    spec.type = ValueType::Span;
  } else if (type == "position") {
    spec.type = ValueType::Position;
  } else {
    throw FormatError("unknown spec type '" + type + "'");
  }
  for (const json& jc : j.at("constraints")) {
    Constraint c;
    c.state = state_from(jc);
    if (jc.contains("strings")) c.strings = jc.at("strings").get<std::vector<std::string>>();
    if (jc.contains("spans"))
      for (const json& s : jc.at("spans")) c.spans.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
    if (jc.contains("positions")) c.positions = jc.at("positions").get<std::vector<int>>();
    spec.constraints.push_back(std::move(c));
  }
  if (j.contains("unlabeled"))
    for (const json& s : j.at("unlabeled")) spec.unlabeled.push_back(state_from(s));
  return spec;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string split_name(Split split) {
  switch (split) {
    case Split::Train:
      return "train";
    case Split::Validation:
      return "validation";
    case Split::Test:
      return "test";
  }
  return "?";
}

Spec Task::spec() const {
  std::vector<std::pair<std::vector<std::string>, std::string>> ex;
  for (int i = 0; i < spec_count && i < static_cast<int>(examples.size()); ++i)
    ex.emplace_back(examples[i].inputs, examples[i].output);
  return make_string_spec(ex);
}

std::vector<Task> parse_tasks(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(source, std::string("invalid JSON: ") + e.what());
  }
  const json& list = field(doc, "tasks", source);
  if (!list.is_array()) bad(source, "'tasks' must be an array");
  std::vector<Task> tasks;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& jt = list[i];
    std::string where = source + ": tasks[" + std::to_string(i) + "]";
    Task t;
    t.id = string_field(jt, "id", where);
    where += " (" + t.id + ")";
    if (t.id.empty()) bad(where, "empty id");
    if (!ids.insert(t.id).second) throw DuplicateIdError(source + ": duplicate task id '" + t.id + "'");
    const json& exs = field(jt, "examples", where);
    if (!exs.is_array()) bad(where, "'examples' must be an array");
    for (std::size_t e = 0; e < exs.size(); ++e) {
      const std::string ew = where + ".examples[" + std::to_string(e) + "]";
      Example ex;
      ex.inputs = string_list(field(exs[e], "inputs", ew), ew + ".inputs");
      ex.output = string_field(exs[e], "output", ew);
      if (ex.inputs.empty()) bad(ew, "no inputs");
      if (!t.examples.empty() && ex.inputs.size() != t.examples.front().inputs.size())
        bad(ew, "input arity differs from the first example");
      t.examples.push_back(std::move(ex));
    }
    if (t.examples.size() < 2) bad(where, "needs at least 2 examples");
    if (jt.contains("spec_count")) {
      if (!jt.at("spec_count").is_number_integer()) bad(where, "'spec_count' must be an integer");
      t.spec_count = jt.at("spec_count").get<int>();
    }
    if (t.spec_count < 1 || t.spec_count >= static_cast<int>(t.examples.size()))
      bad(where, "'spec_count' must be in [1, number of examples)");
    const auto split = parse_split(string_field(jt, "split", where));
    if (!split) bad(where, "'split' must be train, validation or test");
    t.split = *split;
    tasks.push_back(std::move(t));
  }
  if (tasks.empty()) bad(source, "no tasks");
  std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.id < b.id; });
  return tasks;
}

std::vector<Task> load_tasks(const std::string& path) {
  return parse_tasks(read_file(path), path);
}

std::vector<Task> tasks_in(const std::vector<Task>& tasks, Split split) {
  std::vector<Task> out;
  for (const Task& t : tasks)
    if (t.split == split) out.push_back(t);
  return out;
}

std::vector<TraceRecord> collect_traces(const std::vector<Task>& tasks, const Ranker& ranker,
                                        int rotations) {
  std::vector<TraceRecord> out;
  for (const Task& original : tasks) {
    const int n = std::clamp(rotations, 1, static_cast<int>(original.examples.size()));
    for (int rot = 0; rot < n; ++rot) {
      Task task = original;
      std::rotate(task.examples.begin(), task.examples.begin() + rot, task.examples.end());
      Engine engine(ranker);
      engine.set_observer([&](SymbolId symbol, int depth, const Spec& spec,
                              std::span<const ProductionId> productions,
                              const std::vector<ProgramSet>& sets) {
        for (std::size_t i = 0; i < productions.size(); ++i) {
          TraceRecord r;
          r.task = task.id;
          r.production = productions[i];
          r.symbol = symbol;
          r.depth = depth;
          r.spec = spec;
          r.label = sets[i].best_score();
          out.push_back(std::move(r));
        }
      });
      engine.synthesize(task.spec(), 1);
    }
  }
  return out;
}

std::string trace_to_json(const TraceRecord& r) {
  json j;
  j["task"] = r.task;
  j["production"] = std::string(production_name(r.production));
  j["symbol"] = std::string(symbol_name(r.symbol));
  j["depth"] = r.depth;
  j["spec"] = spec_json(r.spec);
  if (r.finite()) {
    j["label"] = r.label;
  } else {
    j["label"] = "-inf";
  }
  return j.dump();
}

TraceRecord trace_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid trace JSON: ") + e.what());
  }
  try {
    TraceRecord r;
    r.task = j.value("task", std::string());
    const auto p = parse_production_name(j.at("production").get<std::string>());
    const auto s = parse_symbol_name(j.at("symbol").get<std::string>());
    if (!p || !s) throw FormatError("unknown production or symbol");
    r.production = *p;
    r.symbol = *s;
    r.depth = j.at("depth").get<int>();
    r.spec = spec_from(j.at("spec"));
    const json& label = j.at("label");
    if (label.is_string()) {
      if (label.get<std::string>() != "-inf") throw FormatError("label must be a number or \"-inf\"");
      r.label = kNegInf;
    } else {
      r.label = label.get<double>();
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad trace record: ") + e.what());
  }
}

void write_traces(const std::string& path, const std::vector<TraceRecord>& records) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  for (const TraceRecord& r : records) f << trace_to_json(r) << '\n';
  if (!f) throw std::runtime_error("cannot write " + path);
}

std::vector<TraceRecord> read_traces(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::vector<TraceRecord> out;
  std::string line;
  for (int n = 1; std::getline(f, line); ++n) {
    if (line.empty()) continue;
    try {
      out.push_back(trace_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TraceRecord> traces_in(const std::vector<TraceRecord>& records,
                                   const std::vector<Task>& tasks, Split split) {
  std::unordered_set<std::string> ids;
  for (const Task& t : tasks)
    if (t.split == split) ids.insert(t.id);
  std::vector<TraceRecord> out;
  for (const TraceRecord& r : records)
    if (ids.count(r.task)) out.push_back(r);
  return out;
}

bool satisfies_all(const Program& program, const std::vector<Example>& examples) {
  for (const Example& e : examples) {
    const auto out = eval_program(program, InputState{e.inputs, std::nullopt});
    if (!out || *out != e.output) return false;
  }
  return true;
}

double geometric_mean(const std::vector<double>& ratios) {
  if (ratios.empty()) return 1.0;
  double log_sum = 0.0;
  for (double r : ratios) log_sum += std::log(r);
  return std::exp(log_sum / static_cast<double>(ratios.size()));
}

namespace {

TaskResult run_task(const Task& task, const EngineConfig* config, const EvalOptions& options) {
  TaskResult r;
  r.id = task.id;
  const Spec spec = task.spec();
  std::vector<double> times;
  for (int rep = 0; rep < std::max(1, options.repeats); ++rep) {
    std::optional<GuidedPolicy> policy;
    if (config && config->assignment) policy.emplace(*config->assignment, config->controller);
    Engine engine(options.ranker, policy ? &*policy : nullptr);
    const ProgramSet result = engine.synthesize(spec, options.k);
    times.push_back(engine.stats().wall_seconds);
    if (rep == 0) {
      r.stats = engine.stats();
      r.found = !result.empty();
      if (r.found) {
        r.program = result.front().text;
        r.correct = satisfies_all(result.front().program, task.examples);
      }
    }
  }
  r.seconds = median(times);
  return r;
}

EngineReport summarize(std::string name, std::vector<TaskResult> results,
                       const std::vector<TaskResult>& base, const EvalOptions& options) {
  EngineReport e;
  e.name = std::move(name);
  e.tasks = std::move(results);
  std::vector<double> by_exp, by_wall;
  double correct = 0.0, fraction = 0.0;
  for (std::size_t i = 0; i < e.tasks.size(); ++i) {
    TaskResult& t = e.tasks[i];
    const TaskResult& b = base[i];
    correct += t.correct;
    t.branch_fraction = b.stats.branches_explored > 0
                            ? static_cast<double>(t.stats.branches_explored) /
                                  static_cast<double>(b.stats.branches_explored)
                            : 1.0;
    fraction += t.branch_fraction;
    if (b.stats.node_expansions >= options.gate_expansions && t.stats.node_expansions > 0)
      by_exp.push_back(static_cast<double>(b.stats.node_expansions) /
                       static_cast<double>(t.stats.node_expansions));
    if (b.seconds >= options.gate_seconds && t.seconds > 0.0) by_wall.push_back(b.seconds / t.seconds);
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, e.tasks.size()));
  e.accuracy = correct / n;
  e.branch_fraction = fraction / n;
  e.speedup_expansions = geometric_mean(by_exp);
  e.gated_by_expansions = static_cast<int>(by_exp.size());
  e.speedup_wall = geometric_mean(by_wall);
  e.gated_by_wall = static_cast<int>(by_wall.size());
  return e;
}

}  // namespace

MetricsReport evaluate(const std::vector<Task>& tasks, const std::vector<EngineConfig>& engines,
                       const EvalOptions& options) {
  MetricsReport report;
  report.options = options;
  std::vector<TaskResult> base;
  for (const Task& t : tasks) base.push_back(run_task(t, nullptr, options));
  report.engines.push_back(summarize("baseline", base, base, options));
  for (const EngineConfig& config : engines) {
    std::vector<TaskResult> results;
    for (const Task& t : tasks) results.push_back(run_task(t, &config, options));
    report.engines.push_back(summarize(config.name, std::move(results), base, options));
  }
  return report;
}

std::string MetricsReport::to_json() const {
  json j;
  j["options"] = {{"k", options.k},
                  {"repeats", options.repeats},
                  {"gate_seconds", options.gate_seconds},
                  {"gate_expansions", options.gate_expansions}};
  json list = json::array();
  for (const EngineReport& e : engines) {
    json tasks = json::array();
    for (const TaskResult& t : e.tasks) {
      tasks.push_back({{"id", t.id},
                       {"found", t.found},
                       {"correct", t.correct},
                       {"program", t.program},
                       {"seconds", t.seconds},
                       {"node_expansions", t.stats.node_expansions},
                       {"branches_explored", t.stats.branches_explored},
                       {"branches_total", t.stats.branches_total},
                       {"guided_decisions", t.stats.guided_decisions},
                       {"guided_branches", t.stats.guided_branches},
                       {"fallbacks", t.stats.fallbacks},
                       {"branch_fraction", t.branch_fraction}});
    }
    list.push_back({{"name", e.name},
                    {"accuracy", e.accuracy},
                    {"branch_fraction", e.branch_fraction},
                    {"speedup_expansions", e.speedup_expansions},
                    {"gated_by_expansions", e.gated_by_expansions},
                    {"speedup_wall", e.speedup_wall},
                    {"gated_by_wall", e.gated_by_wall},
                    {"tasks", tasks}});
  }
  j["engines"] = list;
  return j.dump(2);
}

std::string MetricsReport::table() const {
  std::ostringstream os;
  std::size_t width = 6;
  for (const EngineReport& e : engines) width = std::max(width, e.name.size());
  os << std::left << std::setw(static_cast<int>(width)) << "Engine" << "  Accuracy  Speed-up"
     << "  Speed-up (wall)  % of branches\n";
  os << std::fixed;
  for (const EngineReport& e : engines) {
    os << std::left << std::setw(static_cast<int>(width)) << e.name << "  " << std::right
       << std::setw(7) << std::setprecision(2) << 100.0 * e.accuracy << "%  " << std::setw(7)
       << std::setprecision(2) << e.speedup_expansions << "x  ";
    if (e.gated_by_wall > 0) {
      os << std::setw(14) << std::setprecision(2) << e.speedup_wall << "x";
    } else {
      os << std::setw(15) << "n/a";
    }
    os << "  " << std::setw(12) << std::setprecision(2) << 100.0 * e.branch_fraction << "\n";
  }
  if (!engines.empty())
    os << "speed-up over " << engines.front().gated_by_expansions
       << " tasks with >= " << options.gate_expansions << " baseline node expansions; wall "
       << "clock over " << engines.front().gated_by_wall << " tasks with >= "
       << options.gate_seconds << " s\n";
  return os.str();
}

}  // namespace ngds
