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

// Task corpus, trace datasets and the evaluation harness.
//
// Task file:
//   { "tasks": [ { "id": str, "examples": [ { "inputs": [str], "output": str } ],
//                  "spec_count": int, "split": "train|validation|test" } ] }
// Trace file: one JSON object per line with fields task, production, symbol,
// depth, spec and label (a number or "-inf").

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ngds/guidance.hpp"
#include "ngds/ranking.hpp"
#include "ngds/score_model.hpp"
#include "ngds/search.hpp"

namespace ngds {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateIdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Split { Train, Validation, Test };
std::string split_name(Split split);

struct Example {
  std::vector<std::string> inputs;
  std::string output;
};

struct Task {
  std::string id;
  std::vector<Example> examples;
  int spec_count = 1;
  Split split = Split::Train;

  /// String spec over the first spec_count examples.
  Spec spec() const;
};

/// Validated tasks sorted by id. `source` names the input in diagnostics.
std::vector<Task> parse_tasks(const std::string& text, const std::string& source = "<corpus>");
std::vector<Task> load_tasks(const std::string& path);
std::vector<Task> tasks_in(const std::vector<Task>& tasks, Split split);

/// Runs baseline top-1 synthesis on every task and records one labeled
/// record per production at every decision the search explores in full.
/// With rotations r > 1 each task is also run with its examples rotated by
/// 1..r-1 places, so other examples of the same task form the spec.
std::vector<TraceRecord> collect_traces(const std::vector<Task>& tasks,
                                        const Ranker& ranker = Ranker(), int rotations = 1);

std::string trace_to_json(const TraceRecord& record);
TraceRecord trace_from_json(const std::string& line);
void write_traces(const std::string& path, const std::vector<TraceRecord>& records);
std::vector<TraceRecord> read_traces(const std::string& path);

/// Records whose task id belongs to `split`.
std::vector<TraceRecord> traces_in(const std::vector<TraceRecord>& records,
                                   const std::vector<Task>& tasks, Split split);

struct EngineConfig {
  std::string name;
  std::optional<ModelAssignment> assignment;  // nullopt searches in full
  ControllerConfig controller;
};

struct EvalOptions {
  int k = 1;
  int repeats = 5;                // wall clock is the median over repeats
  double gate_seconds = 0.5;      // wall-clock speed-up gate on baseline time
  long gate_expansions = 100;     // expansion speed-up gate on baseline count
  Ranker ranker;
};

struct TaskResult {
  std::string id;
  bool found = false;
  bool correct = false;
  std::string program;
  double seconds = 0.0;
  SearchStats stats;
  double branch_fraction = 1.0;  // explored / baseline explored
};

struct EngineReport {
  std::string name;
  std::vector<TaskResult> tasks;
  double accuracy = 0.0;
  double branch_fraction = 1.0;  // mean over tasks
  double speedup_expansions = 1.0;
  int gated_by_expansions = 0;
  double speedup_wall = 1.0;
  int gated_by_wall = 0;
};

struct MetricsReport {
  EvalOptions options;
  std::vector<EngineReport> engines;  // baseline first

  std::string to_json() const;
  std::string table() const;
};

double geometric_mean(const std::vector<double>& ratios);

/// Evaluates the baseline and every engine on `tasks`.
MetricsReport evaluate(const std::vector<Task>& tasks, const std::vector<EngineConfig>& engines,
                       const EvalOptions& options = EvalOptions());

/// True when `program` maps every example's inputs to its output.
bool satisfies_all(const Program& program, const std::vector<Example>& examples);

}  // namespace ngds
