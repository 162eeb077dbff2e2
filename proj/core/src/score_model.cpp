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

#include "ngds/score_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>

namespace ngds {

namespace {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using CMap = Map<const MatrixXd>;
using CVec = Map<const VectorXd>;
using MMap = Map<MatrixXd>;
using MVec = Map<VectorXd>;

constexpr int kPrintableFirst = 32;
constexpr int kPrintableLast = 126;
constexpr int kUnk = kPrintableLast - kPrintableFirst + 1;
constexpr int kSep = kUnk + 1;
constexpr int kVocab = kSep + 1;
constexpr int kContext = 3;

int char_token(char ch) {
  const int c = static_cast<unsigned char>(ch);
  if (c < kPrintableFirst || c > kPrintableLast) return kUnk;
  return c - kPrintableFirst;
}

void append_text(std::vector<int>& out, std::string_view s) {
  for (char c : s) out.push_back(char_token(c));
}

void clip(std::vector<int>& v) {
  if (v.size() > static_cast<std::size_t>(ScoreModel::kMaxChars)) v.resize(ScoreModel::kMaxChars);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

// Offsets of every tensor inside the flat parameter vector.
struct ModelLayout {
  int H, E;
  std::size_t prod, chars, in_wx, in_wh, in_b, out_wx, out_wh, out_b, w1, b1, w2, b2, total;

  ModelLayout(int hidden, int embed) : H(hidden), E(embed) {
    std::size_t at = 0;
    auto take = [&](std::size_t n) {
      const std::size_t o = at;
      at += n;
      return o;
    };
    const std::size_t G = 4 * static_cast<std::size_t>(H);
    prod = take(static_cast<std::size_t>(H) * kProductionCount);
    chars = take(static_cast<std::size_t>(E) * kVocab);
    in_wx = take(G * E);
    in_wh = take(G * H);
    in_b = take(G);
    out_wx = take(G * E);
    out_wh = take(G * H);
    out_b = take(G);
    w1 = take(static_cast<std::size_t>(H) * (H + 1));
    b1 = take(H);
    w2 = take(H);
    b2 = take(1);
    total = at;
  }

  struct Group {
    const char* name;
    std::size_t offset;
    std::size_t size;
  };
  std::vector<Group> groups() const {
    return {{"production_embedding", prod, chars - prod},
            {"char_embedding", chars, in_wx - chars},
            {"input_wx", in_wx, in_wh - in_wx},
            {"input_wh", in_wh, in_b - in_wh},
            {"input_b", in_b, out_wx - in_b},
            {"output_wx", out_wx, out_wh - out_wx},
            {"output_wh", out_wh, out_b - out_wh},
            {"output_b", out_b, w1 - out_b},
            {"dense1_w", w1, b1 - w1},
            {"dense1_b", b1, w2 - b1},
            {"dense2_w", w2, b2 - w2},
            {"dense2_b", b2, 1}};
  }
};

namespace {

struct Step {
  int token;
  VectorXd h_prev, c_prev, i, f, g, o, c, tanh_c;
};

struct Lstm {
  CMap wx, wh;
  CVec b;
};

Lstm lstm_view(const double* p, const ModelLayout& L, bool output) {
  const int G = 4 * L.H;
  const std::size_t wx = output ? L.out_wx : L.in_wx;
  const std::size_t wh = output ? L.out_wh : L.in_wh;
  const std::size_t b = output ? L.out_b : L.in_b;
  return {CMap(p + wx, G, L.E), CMap(p + wh, G, L.H), CVec(p + b, G)};
}

void lstm_forward(const Lstm& net, const CMap& chars, const std::vector<int>& tokens, VectorXd& h,
                  VectorXd& c, std::vector<Step>* cache) {
  const int H = static_cast<int>(h.size());
  VectorXd z(4 * H);
  for (int t : tokens) {
    z.noalias() = net.b;
    z.noalias() += net.wx * chars.col(t);
    z.noalias() += net.wh * h;
    Step s;
    s.token = t;
    s.i = z.segment(0, H).unaryExpr(&sigmoid);
    s.f = z.segment(H, H).unaryExpr(&sigmoid);
    s.g = z.segment(2 * H, H).array().tanh();
    s.o = z.segment(3 * H, H).unaryExpr(&sigmoid);
    VectorXd c_next = s.f.cwiseProduct(c) + s.i.cwiseProduct(s.g);
    s.tanh_c = c_next.array().tanh();
    VectorXd h_next = s.o.cwiseProduct(s.tanh_c);
    if (cache) {
      s.h_prev = h;
      s.c_prev = c;
      s.c = c_next;
      cache->push_back(std::move(s));
    }
    h = std::move(h_next);
    c = std::move(c_next);
  }
}


// Accumulates parameter gradients and turns (dh, dc) at the end of the
// sequence into (dh, dc) at its start.
void lstm_backward(const Lstm& net, const CMap& chars, const std::vector<Step>& steps, MMap gwx,
                   MMap gwh, MVec gb, MMap gchars, VectorXd& dh, VectorXd& dc) {
  const int H = static_cast<int>(dh.size());
  VectorXd dz(4 * H);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const Step& s = *it;
    const VectorXd dcell =
        dc + (dh.array() * s.o.array() * (1.0 - s.tanh_c.array().square())).matrix();
    dz.segment(0, H) = (dcell.array() * s.g.array() * s.i.array() * (1.0 - s.i.array())).matrix();
    dz.segment(H, H) =
        (dcell.array() * s.c_prev.array() * s.f.array() * (1.0 - s.f.array())).matrix();
    dz.segment(2 * H, H) = (dcell.array() * s.i.array() * (1.0 - s.g.array().square())).matrix();
    dz.segment(3 * H, H) =
        (dh.array() * s.tanh_c.array() * s.o.array() * (1.0 - s.o.array())).matrix();
    gwx.noalias() += dz * chars.col(s.token).transpose();
    gwh.noalias() += dz * s.h_prev.transpose();
    gb += dz;
    gchars.col(s.token).noalias() += net.wx.transpose() * dz;
    dc = dcell.cwiseProduct(s.f);
    dh.noalias() = net.wh.transpose() * dz;
  }
}

struct Sample {
  int production = 0;
  EncodedSpec enc;
  double target = 0.0;
};

// Forward-only pass in scalar type S.
template <typename S>
S forward(const ModelLayout& L, const S* p, const Sample& s) {
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
  const int H = L.H, G = 4 * L.H;
  const Map<const Mat> chars(p + L.chars, L.E, kVocab);
  Vec h = Map<const Mat>(p + L.prod, H, kProductionCount).col(s.production);
  Vec c = Vec::Zero(H);
  Vec z(G);
  auto sig = [](S x) { return S(1) / (S(1) + std::exp(-x)); };
  for (int pass = 0; pass < 2; ++pass) {
    const bool out = pass == 1;
    const Map<const Mat> wx(p + (out ? L.out_wx : L.in_wx), G, L.E);
    const Map<const Mat> wh(p + (out ? L.out_wh : L.in_wh), G, H);
    const Map<const Vec> b(p + (out ? L.out_b : L.in_b), G);
    for (int t : out ? s.enc.output : s.enc.input) {
      z.noalias() = b;
      z.noalias() += wx * chars.col(t);
      z.noalias() += wh * h;
      const Vec i = z.segment(0, H).unaryExpr(sig);
      const Vec f = z.segment(H, H).unaryExpr(sig);
      const Vec g = z.segment(2 * H, H).array().tanh();
      const Vec o = z.segment(3 * H, H).unaryExpr(sig);
      c = f.cwiseProduct(c) + i.cwiseProduct(g);
      h = o.array() * c.array().tanh();
    }
  }
  Vec feat(H + 1);
  feat << h, S(0.5) * S(s.enc.examples - 1);
  const Vec a = (Map<const Mat>(p + L.w1, H, H + 1) * feat + Map<const Vec>(p + L.b1, H))
                    .array()
                    .tanh();
  return Map<const Vec>(p + L.w2, H).dot(a) + p[L.b2];
}

// Forward pass; with `grad` set, also adds weight * d(y - target)^2 / dparams.
double run(const ModelLayout& L, const double* p, const Sample& s, double* grad, double weight) {
  const int H = L.H;
  const CMap prod(p + L.prod, H, kProductionCount);
  const CMap chars(p + L.chars, L.E, kVocab);
  const Lstm in = lstm_view(p, L, false);
  const Lstm out = lstm_view(p, L, true);
  const CMap w1(p + L.w1, H, H + 1);
  const CVec b1(p + L.b1, H);
  const CVec w2(p + L.w2, H);
  const double b2 = p[L.b2];

  VectorXd h = prod.col(s.production);
  VectorXd c = VectorXd::Zero(H);
  std::vector<Step> in_steps, out_steps;
  lstm_forward(in, chars, s.enc.input, h, c, grad ? &in_steps : nullptr);
  lstm_forward(out, chars, s.enc.output, h, c, grad ? &out_steps : nullptr);
  VectorXd feat(H + 1);
  feat << h, 0.5 * (s.enc.examples - 1);
  const VectorXd a = (w1 * feat + b1).array().tanh();
  const double y = w2.dot(a) + b2;
  if (!grad) return y;

  const double dy = weight * 2.0 * (y - s.target);
  MVec(grad + L.w2, H) += dy * a;
  grad[L.b2] += dy;
  const VectorXd dpre = (dy * w2.array() * (1.0 - a.array().square())).matrix();
  MMap(grad + L.w1, H, H + 1).noalias() += dpre * feat.transpose();
  MVec(grad + L.b1, H) += dpre;
  VectorXd dh = (w1.transpose() * dpre).head(H);
  VectorXd dc = VectorXd::Zero(H);
  const int G = 4 * H;
  MMap gchars(grad + L.chars, L.E, kVocab);
  lstm_backward(out, chars, out_steps, MMap(grad + L.out_wx, G, L.E), MMap(grad + L.out_wh, G, H),
                MVec(grad + L.out_b, G), gchars, dh, dc);
  lstm_backward(in, chars, in_steps, MMap(grad + L.in_wx, G, L.E), MMap(grad + L.in_wh, G, H),
                MVec(grad + L.in_b, G), gchars, dh, dc);
  MMap(grad + L.prod, H, kProductionCount).col(s.production) += dh;
  return y;
}

double sq(double x) { return x * x; }

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void round_to_float(std::vector<double>& v) {
  for (double& x : v) x = static_cast<double>(static_cast<float>(x));
}

template <typename T>
void put(std::string& out, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(const std::string& in, std::size_t& at) {
  if (at + sizeof(T) > in.size()) throw std::runtime_error("model file truncated");
  T value;
  std::memcpy(&value, in.data() + at, sizeof(T));
  at += sizeof(T);
  return value;
}

}  // namespace

bool TraceRecord::finite() const { return std::isfinite(label); }

int vocab_size() { return kVocab; }

std::uint64_t vocab_hash() {
  std::string chars;
  for (int c = kPrintableFirst; c <= kPrintableLast; ++c) chars.push_back(static_cast<char>(c));
  chars += "\x01UNK\x01SEP";
  return fnv1a(chars);
}

EncodedSpec encode_spec(const Spec& spec) {
  EncodedSpec e;
  e.examples = std::max<int>(1, static_cast<int>(spec.constraints.size()));
  if (spec.constraints.empty()) return e;
  const Constraint& c = spec.constraints.front();
  switch (spec.type) {
    case ValueType::String: {
      for (std::size_t i = 0; i < c.state.inputs.size(); ++i) {
        if (i) e.input.push_back(kSep);
        append_text(e.input, c.state.inputs[i]);
      }
      for (std::size_t i = 0; i < c.strings.size(); ++i) {
        if (i) e.output.push_back(kSep);
        append_text(e.output, c.strings[i]);
      }
      break;
    }
    case ValueType::Span: {
      const std::string& x = c.state.x();
      append_text(e.input, x);
      if (!c.spans.empty()) {
        const Span s = c.spans.front();
        const int lo = std::max(0, s.start - kContext);
        append_text(e.output, std::string_view(x).substr(lo, s.start - lo));
        e.output.push_back(kSep);
        append_text(e.output, std::string_view(x).substr(s.start, s.end - s.start));
        e.output.push_back(kSep);
        append_text(e.output, std::string_view(x).substr(s.end, kContext));
      }
      break;
    }
    case ValueType::Position: {
      const std::string& x = c.state.x();
      append_text(e.input, x);
      if (!c.positions.empty()) {
        const int p = c.positions.front();
        const int lo = std::max(0, p - kContext);
        append_text(e.output, std::string_view(x).substr(lo, p - lo));
        e.output.push_back(kSep);
        append_text(e.output, std::string_view(x).substr(p, kContext));
      }
      break;
    }
  }
  clip(e.input);
  clip(e.output);
  return e;
}

ScoreModel::ScoreModel(SymbolId symbol, int hidden, int embed)
    : symbol_(symbol), hidden_(hidden), embed_(embed) {
  params_.assign(ModelLayout(hidden, embed).total, 0.0);
}

ScoreModel ScoreModel::zeros(SymbolId symbol, int hidden, int embed) {
  return ScoreModel(symbol, hidden, embed);
}

ScoreModel ScoreModel::random(SymbolId symbol, const Hyperparams& hp) {
  ScoreModel m(symbol, hp.hidden, hp.embed);
  m.seed_ = hp.seed;
  const ModelLayout L(hp.hidden, hp.embed);
  std::mt19937_64 rng(hp.seed);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (double& x : m.params_) x = u(rng);
  for (std::size_t b : {L.in_b, L.out_b}) {
    for (int i = 0; i < 4 * hp.hidden; ++i) m.params_[b + i] = 0.0;
    for (int i = 0; i < hp.hidden; ++i) m.params_[b + hp.hidden + i] = 1.0;
  }
  round_to_float(m.params_);
  return m;
}

void ScoreModel::set_normalization(double mean, double scale, double min_label) {
  mean_ = mean;
  scale_ = scale;
  min_label_ = min_label;
}

double ScoreModel::floor_target() const { return (min_label_ - mean_) / scale_ - 2.0; }

double ScoreModel::normalize(double label) const {
  if (!std::isfinite(label)) return floor_target();
  return (label - mean_) / scale_;
}

double ScoreModel::predict_normalized(ProductionId production, const Spec& spec) const {
  Sample s{static_cast<int>(production), encode_spec(spec), 0.0};
  return forward(ModelLayout(hidden_, embed_), params_.data(), s);
}

double ScoreModel::predict(ProductionId production, const Spec& spec) const {
  return denormalize(predict_normalized(production, spec));
}

double ScoreModel::loss(const std::vector<TraceRecord>& batch) const {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const TraceRecord& r : batch)
    total += sq(predict_normalized(r.production, r.spec) - normalize(r.label));
  return total / static_cast<double>(batch.size());
}

std::vector<double> ScoreModel::gradient(const TraceRecord& record) const {
  std::vector<double> g(params_.size(), 0.0);
  Sample s{static_cast<int>(record.production), encode_spec(record.spec), normalize(record.label)};
  run(ModelLayout(hidden_, embed_), params_.data(), s, g.data(), 1.0);
  return g;
}

std::string ScoreModel::serialize() const {
  std::string out = "NGSM";
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(hidden_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(embed_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(kVocab));
  put<std::uint64_t>(out, vocab_hash());
  put<double>(out, mean_);
  put<double>(out, scale_);
  put<double>(out, min_label_);
  put<std::uint64_t>(out, seed_);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(symbol_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params_.size()));
  for (double x : params_) put<float>(out, static_cast<float>(x));
  return out;
}

ScoreModel ScoreModel::deserialize(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "NGSM") != 0)
    throw std::runtime_error("not a score model file");
  std::size_t at = 4;
  if (get<std::uint32_t>(bytes, at) != kFormatVersion)
    throw std::runtime_error("unsupported model format version");
  const auto hidden = get<std::uint32_t>(bytes, at);
  const auto embed = get<std::uint32_t>(bytes, at);
  if (hidden == 0 || embed == 0 || hidden > 4096 || embed > 4096)
    throw std::runtime_error("bad model dimensions");
  if (get<std::uint32_t>(bytes, at) != static_cast<std::uint32_t>(kVocab) ||
      get<std::uint64_t>(bytes, at) != vocab_hash())
    throw std::runtime_error("model vocabulary mismatch");
  const double mean = get<double>(bytes, at);
  const double scale = get<double>(bytes, at);
  const double min_label = get<double>(bytes, at);
  const auto seed = get<std::uint64_t>(bytes, at);
  const auto symbol = get<std::uint32_t>(bytes, at);
  if (symbol >= kSymbolCount) throw std::runtime_error("bad model symbol");
  ScoreModel m(static_cast<SymbolId>(symbol), static_cast<int>(hidden), static_cast<int>(embed));
  if (get<std::uint32_t>(bytes, at) != m.params_.size())
    throw std::runtime_error("model parameter count mismatch");
  for (double& x : m.params_) x = get<float>(bytes, at);
  if (at != bytes.size()) throw std::runtime_error("trailing bytes in model file");
  m.set_normalization(mean, scale, min_label);
  m.seed_ = seed;
  return m;
}

void ScoreModel::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  const std::string bytes = serialize();
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("cannot write " + path);
}

ScoreModel ScoreModel::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return deserialize(ss.str());
}

ScoreModel train(const std::vector<TraceRecord>& train_records,
                 const std::vector<TraceRecord>& validation_records, SymbolId symbol,
                 const Hyperparams& hp, TrainingLog* log) {
  std::vector<double> finite;
  for (const TraceRecord& r : train_records)
    if (r.symbol == symbol && r.finite()) finite.push_back(r.label);
  if (finite.empty()) throw EmptyDatasetError("no finite training labels for symbol");
  const double mean = std::accumulate(finite.begin(), finite.end(), 0.0) / finite.size();
  double var = 0.0;
  for (double x : finite) var += sq(x - mean);
  double scale = std::sqrt(var / finite.size());
  if (scale < 1e-6) scale = 1.0;
  const double min_label = *std::min_element(finite.begin(), finite.end());

  ScoreModel model = ScoreModel::random(symbol, hp);
  model.set_normalization(mean, scale, min_label);

  auto samples_of = [&](const std::vector<TraceRecord>& records) {
    std::vector<Sample> out;
    std::set<std::tuple<int, std::vector<int>, std::vector<int>, int, double>> seen;
    for (const TraceRecord& r : records) {
      if (r.symbol != symbol) continue;
      Sample s{static_cast<int>(r.production), encode_spec(r.spec), model.normalize(r.label)};
      if (seen.emplace(s.production, s.enc.input, s.enc.output, s.enc.examples, s.target).second)
        out.push_back(std::move(s));
    }
    return out;
  };
  const std::vector<Sample> train_set = samples_of(train_records);
  const std::vector<Sample> val_set = samples_of(validation_records);

  const ModelLayout L(hp.hidden, hp.embed);
  std::vector<double>& p = model.mutable_parameters();
  const std::size_t n = p.size();
  auto mean_loss = [&](const std::vector<Sample>& set) {
    double total = 0.0;
    for (const Sample& s : set) total += sq(forward(L, p.data(), s) - s.target);
    return set.empty() ? 0.0 : total / static_cast<double>(set.size());
  };
  const std::vector<Sample>& monitor = val_set.empty() ? train_set : val_set;

  std::vector<double> m(n, 0.0), v(n, 0.0), g(n);
  std::vector<double> best = p;
  double best_loss = mean_loss(monitor);
  int best_epoch = 0;
  if (log) log->validation_loss.push_back(best_loss);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::uint64_t t = 0;
  std::mt19937_64 rng(hp.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = static_cast<std::size_t>(std::max(1, hp.batch_size));

  for (int epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t lo = 0; lo < order.size(); lo += batch) {
      const std::size_t hi = std::min(order.size(), lo + batch);
      const double w = 1.0 / static_cast<double>(hi - lo);
      std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t i = lo; i < hi; ++i) {
        const Sample& s = train_set[order[i]];
        epoch_loss += sq(run(L, p.data(), s, g.data(), w) - s.target);
      }
      double norm = 0.0;
      for (double x : g) norm += x * x;
      norm = std::sqrt(norm);
      if (!std::isfinite(norm)) throw NonFiniteLossError("non-finite gradient");
      const double shrink = norm > hp.clip_norm ? hp.clip_norm / norm : 1.0;
      ++t;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
      for (std::size_t j = 0; j < n; ++j) {
        const double gj = g[j] * shrink;
        m[j] = kBeta1 * m[j] + (1.0 - kBeta1) * gj;
        v[j] = kBeta2 * v[j] + (1.0 - kBeta2) * gj * gj;
        p[j] -= hp.learning_rate * (m[j] / c1) / (std::sqrt(v[j] / c2) + kEps);
      }
    }
    epoch_loss /= static_cast<double>(std::max<std::size_t>(1, order.size()));
    if (!std::isfinite(epoch_loss)) throw NonFiniteLossError("non-finite training loss");
    const double val_loss = mean_loss(monitor);
    if (log) {
      log->train_loss.push_back(epoch_loss);
      log->validation_loss.push_back(val_loss);
    }
    if (val_loss < best_loss) {
      best_loss = val_loss;
      best = p;
      best_epoch = epoch;
    } else if (epoch - best_epoch >= hp.patience) {
      break;
    }
  }
  p = best;
  round_to_float(p);
  if (log) log->best_epoch = best_epoch;
  return model;
}

double gradient_check(const ScoreModel& model, const TraceRecord& record, double epsilon,
                      int samples_per_group, std::uint64_t seed) {
  const ModelLayout L(model.hidden(), model.embed());
  const Sample s{static_cast<int>(record.production), encode_spec(record.spec),
                 model.normalize(record.label)};
  std::vector<double> g(model.parameters().size(), 0.0);
  run(L, model.parameters().data(), s, g.data(), 1.0);
  // The numeric side runs in extended precision so that rounding noise
  // stays far below the smallest gradients being checked.
  std::vector<long double> p(model.parameters().begin(), model.parameters().end());
  const long double target = s.target;
  auto loss_at = [&] {
    const long double d = forward(L, p.data(), s) - target;
    return d * d;
  };
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& group : L.groups()) {
    std::uniform_int_distribution<std::size_t> pick(0, group.size - 1);
    const int count = static_cast<int>(std::min<std::size_t>(group.size, samples_per_group));
    for (int i = 0; i < count; ++i) {
      const std::size_t j = group.offset + (static_cast<std::size_t>(count) == group.size
                                                ? static_cast<std::size_t>(i)
                                                : pick(rng));
      const long double saved = p[j];
      p[j] = saved + epsilon;
      const long double up = loss_at();
      p[j] = saved - epsilon;
      const long double down = loss_at();
      p[j] = saved;
      const double numeric = static_cast<double>((up - down) / (2.0L * epsilon));
      const double rel =
          std::abs(g[j] - numeric) / (std::abs(g[j]) + std::abs(numeric) + 1e-8);
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

double flip_accuracy(const std::vector<TraceRecord>& records,
                     const std::function<double(const TraceRecord&)>& predict) {
  std::map<std::tuple<int, int, std::string>, std::map<int, const TraceRecord*>> groups;
  for (const TraceRecord& r : records) {
    auto& g = groups[{static_cast<int>(r.symbol), r.depth, spec_key(r.spec)}];
    g.emplace(static_cast<int>(r.production), &r);
  }
  std::size_t pairs = 0, correct = 0;
  for (const auto& [key, members] : groups) {
    std::vector<std::pair<double, double>> rows;  // (label, prediction)
    int finite = 0;
    for (const auto& [prod, r] : members) {
      rows.emplace_back(r->label, predict(*r));
      finite += r->finite();
    }
    if (finite < 2) continue;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        const auto [la, pa] = rows[a];
        const auto [lb, pb] = rows[b];
        ++pairs;
        if (la == lb || (pa != pb && (la < lb) == (pa < pb))) ++correct;
      }
    }
  }
  return pairs == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(pairs);
}

double flip_accuracy(const ScoreModel& model, const std::vector<TraceRecord>& records) {
  return flip_accuracy(records, [&](const TraceRecord& r) {
    return model.predict(r.production, r.spec);
  });
}

}  // namespace ngds
