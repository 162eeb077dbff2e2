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

// Score model f(production, spec): predicts the best h-score attainable
// through a production for a spec.
//
//   h0 = embed(production), c0 = 0
//   (h, c) = LSTM_in(chars of the inputs, from (h0, c0))
//   (h, c) = LSTM_out(chars of the outputs, from (h, c))
//   a      = tanh(W1 [h; count] + b1)
//   y      = w2 . a + b2               (normalized label space)
//   f      = mean + scale * y
//
// Model file (little endian):
//   char[4] "NGSM"; u32 version; u32 hidden; u32 embed; u32 vocab;
//   u64 vocab_hash; f64 mean; f64 scale; f64 min_label; u64 seed;
//   u32 symbol; u32 parameter_count; f32[parameter_count]
// Parameters are stored in the order: production embedding, char
// embedding, input LSTM (Wx, Wh, b), output LSTM (Wx, Wh, b), W1, b1, w2,
// b2; every matrix column-major. LSTM gate order is i, f, g, o.

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ngds/dsl.hpp"
#include "ngds/spec.hpp"

namespace ngds {

/// One recorded search decision.
struct TraceRecord {
  std::string task;
  ProductionId production = ProductionId::TransformAtom;
  SymbolId symbol = SymbolId::Transform;
  int depth = 0;
  Spec spec;
  double label = 0.0;  // kNegInf for unsatisfiable branches

  bool finite() const;
};

struct Hyperparams {
  int hidden = 64;
  int embed = 16;
  double learning_rate = 1e-2;
  int batch_size = 32;
  int max_epochs = 200;
  int patience = 20;
  double clip_norm = 5.0;
  std::uint64_t seed = 0;
};

struct TrainingLog {
  std::vector<double> train_loss;       // per epoch
  std::vector<double> validation_loss;  // per epoch; epoch 0 is before training
  int best_epoch = 0;
};

class EmptyDatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteLossError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScoreModel {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;
  static constexpr int kMaxChars = 256;

  /// All weights zero, mean 0 and scale 1.
  static ScoreModel zeros(SymbolId symbol, int hidden = 64, int embed = 16);
  /// Small random weights.
  static ScoreModel random(SymbolId symbol, const Hyperparams& hp);

  double predict(ProductionId production, const Spec& spec) const;
  /// Prediction in normalized label space.
  double predict_normalized(ProductionId production, const Spec& spec) const;

  /// Mean squared error in normalized label space; -inf labels map to the
  /// training floor.
  double loss(const std::vector<TraceRecord>& batch) const;

  double normalize(double label) const;
  double denormalize(double y) const { return mean_ + scale_ * y; }
  /// Normalized target used for unsatisfiable labels.
  double floor_target() const;
  /// Predictions below this h-score are treated as unsatisfiable.
  double prune_line() const { return min_label_ - scale_; }

  SymbolId symbol() const { return symbol_; }
  int hidden() const { return hidden_; }
  int embed() const { return embed_; }
  double mean() const { return mean_; }
  double scale() const { return scale_; }
  double min_label() const { return min_label_; }
  std::uint64_t seed() const { return seed_; }
  void set_normalization(double mean, double scale, double min_label);

  const std::vector<double>& parameters() const { return params_; }
  std::vector<double>& mutable_parameters() { return params_; }

  /// Gradient of the single-record loss with respect to every parameter.
  std::vector<double> gradient(const TraceRecord& record) const;

  void save(const std::string& path) const;
  static ScoreModel load(const std::string& path);
  std::string serialize() const;
  static ScoreModel deserialize(const std::string& bytes);

  friend bool operator==(const ScoreModel&, const ScoreModel&) = default;

 private:
  friend struct ModelLayout;
  ScoreModel(SymbolId symbol, int hidden, int embed);

  SymbolId symbol_;
  int hidden_;
  int embed_;
  double mean_ = 0.0;
  double scale_ = 1.0;
  double min_label_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<double> params_;
};

/// Character vocabulary: printable ASCII, then UNK, then the separator.
int vocab_size();
std::uint64_t vocab_hash();

/// Text fed to the two encoders for a spec (first example only).
struct EncodedSpec {
  std::vector<int> input;
  std::vector<int> output;
  int examples = 1;
};
EncodedSpec encode_spec(const Spec& spec);

/// Trains a model for `symbol` on the records of that symbol. Labels are
/// normalized with the training records' mean and standard deviation.
ScoreModel train(const std::vector<TraceRecord>& train_records,
                 const std::vector<TraceRecord>& validation_records, SymbolId symbol,
                 const Hyperparams& hp, TrainingLog* log = nullptr);

/// Max of |analytic - numeric| / (|analytic| + |numeric| + 1e-8) over up to
/// `samples_per_group` parameters of each tensor, numeric being the central
/// difference.
double gradient_check(const ScoreModel& model, const TraceRecord& record, double epsilon,
                      int samples_per_group = 8, std::uint64_t seed = 0);

/// Fraction of same-group production pairs whose predicted order matches
/// the label order. Groups are (symbol, depth, spec); groups with fewer than
/// two finite labels are skipped. Pairs with equal labels always count as
/// correct. Returns 1 when no pair qualifies.
double flip_accuracy(const std::vector<TraceRecord>& records,
                     const std::function<double(const TraceRecord&)>& predict);
double flip_accuracy(const ScoreModel& model, const std::vector<TraceRecord>& records);

}  // namespace ngds
