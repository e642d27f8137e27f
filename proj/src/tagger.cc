// Copyright 2026 The radex Authors.
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

#include "radex/tagger.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "io_util.h"
#include "radex/error.h"
#include "radex/random.h"

namespace radex {

// ---------------------------------------------------------------------------
// EmbeddingTable

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "embedding dim must be > 0");
}

bool EmbeddingTable::Add(std::string word, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorKind::kDimensionMismatch,
                "vector for '" + word + "' has " + std::to_string(vector.size()) +
                    " components, expected " + std::to_string(dim_));
  }
  if (index_.count(word) > 0) {
    ++duplicates_;
    return false;
  }
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  matrix_.insert(matrix_.end(), vector.begin(), vector.end());
  return true;
}

EmbeddingTable EmbeddingTable::Parse(std::istream& in, std::size_t dim) {
  EmbeddingTable table(dim);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (internal::Trim(line).empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    values.clear();
    std::string field;
    while (fields >> field) {
      char* end = nullptr;
      double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0') {
        throw Error(ErrorKind::kParseError, "bad number '" + field + "'", line_no);
      }
      values.push_back(v);
    }
    if (values.size() != dim) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "expected " + std::to_string(dim) + " values, got " +
                      std::to_string(values.size()),
                  line_no);
    }
    table.Add(std::move(word), values);
  }
  if (table.vocab_size() == 0) {
    throw Error(ErrorKind::kEmptyFile, "no embeddings found");
  }
  return table;
}

EmbeddingTable EmbeddingTable::Load(const std::filesystem::path& path,
                                    std::size_t dim) {
  std::ifstream in = internal::OpenInput(path);
  return Parse(in, dim);
}

bool EmbeddingTable::Contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

std::span<const double> EmbeddingTable::Row(std::size_t index) const {
  return {matrix_.data() + index * dim_, dim_};
}

void EmbeddingTable::OovVector(std::string_view word, std::span<double> out) {
  SplitMix64 rng(Fnv1a64(word));
  for (double& v : out) v = rng.NextUniform(-kOovRange, kOovRange);
}

void EmbeddingTable::Lookup(std::string_view word, std::span<double> out) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) {
    OovVector(word, out);
    return;
  }
  std::span<const double> row = Row(it->second);
  std::copy(row.begin(), row.end(), out.begin());
}

std::vector<double> EmbeddingTable::Lookup(std::string_view word) const {
  std::vector<double> out(dim_);
  Lookup(word, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

RecurrentBlock ZeroBlock(std::size_t dim, std::size_t hidden) {
  return RecurrentBlock{Matrix(hidden, dim), Matrix(hidden, hidden),
                        std::vector<double>(hidden, 0.0)};
}

}  // namespace

TaggerParameters TaggerParameters::Zeros(std::size_t dim, std::size_t hidden) {
  TaggerParameters p;
  p.forward = ZeroBlock(dim, hidden);
  p.backward = ZeroBlock(dim, hidden);
  p.output = Matrix(kNumLabels, 2 * hidden);
  p.output_bias.assign(kNumLabels, 0.0);
  return p;
}

std::array<std::span<double>, TaggerParameters::kNumBlocks> TaggerParameters::Blocks() {
  return {std::span<double>(forward.input.data),
          std::span<double>(forward.recurrent.data),
          std::span<double>(forward.bias),
          std::span<double>(backward.input.data),
          std::span<double>(backward.recurrent.data),
          std::span<double>(backward.bias),
          std::span<double>(output.data),
          std::span<double>(output_bias)};
}

std::array<std::span<const double>, TaggerParameters::kNumBlocks>
TaggerParameters::Blocks() const {
  return {std::span<const double>(forward.input.data),
          std::span<const double>(forward.recurrent.data),
          std::span<const double>(forward.bias),
          std::span<const double>(backward.input.data),
          std::span<const double>(backward.recurrent.data),
          std::span<const double>(backward.bias),
          std::span<const double>(output.data),
          std::span<const double>(output_bias)};
}

double TaggerParameters::SquaredNorm() const {
  double sum = 0.0;
  for (auto block : Blocks()) {
    for (double v : block) sum += v * v;
  }
  return sum;
}

bool TaggerParameters::AllFinite() const {
  for (auto block : Blocks()) {
    for (double v : block) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// TaggerModel

TaggerModel::TaggerModel(EmbeddingTable embedding, std::size_t hidden_size,
                         std::uint64_t seed, TaggerParameters params)
    : embedding_(std::move(embedding)),
      hidden_(hidden_size),
      seed_(seed),
      params_(std::move(params)) {}

TaggerModel::TaggerModel(EmbeddingTable embedding, std::size_t hidden_size,
                         std::uint64_t seed)
    : embedding_(std::move(embedding)), hidden_(hidden_size), seed_(seed) {
  if (hidden_size == 0) {
    throw Error(ErrorKind::kInvalidArgument, "hidden size must be >= 1");
  }
  params_ = TaggerParameters::Zeros(embedding_.dim(), hidden_);
  SplitMix64 rng(seed);
  for (auto block : params_.Blocks()) {
    for (double& v : block) v = rng.NextUniform(-0.1, 0.1);
  }
}

TaggerModel TaggerModel::Zero(EmbeddingTable embedding, std::size_t hidden_size) {
  if (hidden_size == 0) {
    throw Error(ErrorKind::kInvalidArgument, "hidden size must be >= 1");
  }
  std::size_t dim = embedding.dim();
  return TaggerModel(std::move(embedding), hidden_size, 0,
                     TaggerParameters::Zeros(dim, hidden_size));
}

namespace {

constexpr char kMagic[] = {'R', 'A', 'D', 'E', 'X', 'M', '1'};

template <typename UInt>
void PutLe(std::ostream& out, UInt value) {
  char bytes[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes, sizeof(UInt));
}

template <typename UInt>
UInt GetLe(std::istream& in) {
  unsigned char bytes[sizeof(UInt)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(UInt))) {
    throw Error(ErrorKind::kInvalidModel, "truncated model file");
  }
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(bytes[i]) << (8 * i);
  }
  return value;
}

void PutDouble(std::ostream& out, double v) {
  PutLe<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

double GetDouble(std::istream& in) {
  return std::bit_cast<double>(GetLe<std::uint64_t>(in));
}

}  // namespace

void TaggerModel::Save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  PutLe<std::uint32_t>(out, kFormatVersion);
  PutLe<std::uint64_t>(out, embedding_.dim());
  PutLe<std::uint64_t>(out, hidden_);
  PutLe<std::uint64_t>(out, seed_);
  PutLe<std::uint64_t>(out, embedding_.vocab_size());
  for (const std::string& w : embedding_.words()) {
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(w.size()));
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
  for (std::size_t i = 0; i < embedding_.vocab_size(); ++i) {
    for (double v : embedding_.Row(i)) PutDouble(out, v);
  }
  for (auto block : params_.Blocks()) {
    for (double v : block) PutDouble(out, v);
  }
}

void TaggerModel::SaveFile(const std::filesystem::path& path) const {
  std::ofstream out = internal::OpenOutput(path);
  Save(out);
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

TaggerModel TaggerModel::Load(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
    throw Error(ErrorKind::kInvalidModel, "not a radex model (bad magic)");
  }
  std::uint32_t version = GetLe<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw Error(ErrorKind::kInvalidModel,
                "unsupported model version " + std::to_string(version));
  }
  std::uint64_t dim = GetLe<std::uint64_t>(in);
  std::uint64_t hidden = GetLe<std::uint64_t>(in);
  std::uint64_t seed = GetLe<std::uint64_t>(in);
  std::uint64_t vocab = GetLe<std::uint64_t>(in);
  constexpr std::uint64_t kSanity = 1ULL << 32;
  if (dim == 0 || hidden == 0 || dim > kSanity || hidden > kSanity || vocab > kSanity) {
    throw Error(ErrorKind::kInvalidModel, "implausible model dimensions");
  }
  std::vector<std::string> words(vocab);
  for (std::string& w : words) {
    std::uint32_t len = GetLe<std::uint32_t>(in);
    w.resize(len);
    if (!in.read(w.data(), len)) {
      throw Error(ErrorKind::kInvalidModel, "truncated vocabulary");
    }
  }
  EmbeddingTable table(dim);
  std::vector<double> row(dim);
  for (std::string& w : words) {
    for (double& v : row) v = GetDouble(in);
    if (!table.Add(std::move(w), row)) {
      throw Error(ErrorKind::kInvalidModel, "duplicate vocabulary entry");
    }
  }
  TaggerParameters params = TaggerParameters::Zeros(dim, hidden);
  for (auto block : params.Blocks()) {
    for (double& v : block) v = GetDouble(in);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::kInvalidModel, "trailing bytes after parameters");
  }
  return TaggerModel(std::move(table), hidden, seed, std::move(params));
}

TaggerModel TaggerModel::LoadFile(const std::filesystem::path& path) {
  std::ifstream in = internal::OpenInput(path);
  return Load(in);
}

// ---------------------------------------------------------------------------
// Forward / backward

namespace {

// out += m * x
void MatVecAdd(const Matrix& m, const double* x, double* out) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.data.data() + r * m.cols;
    double sum = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) sum += row[c] * x[c];
    out[r] += sum;
  }
}

// out += m^T * y
void MatTVecAdd(const Matrix& m, const double* y, double* out) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.data.data() + r * m.cols;
    for (std::size_t c = 0; c < m.cols; ++c) out[c] += row[c] * y[r];
  }
}

// m += a * b^T
void OuterAdd(Matrix& m, const double* a, const double* b) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double* row = m.data.data() + r * m.cols;
    for (std::size_t c = 0; c < m.cols; ++c) row[c] += a[r] * b[c];
  }
}

void RunDirection(const RecurrentBlock& block, const std::vector<double>& inputs,
                  std::size_t length, std::size_t dim, std::size_t hidden,
                  bool reverse, std::vector<double>& states) {
  states.assign(length * hidden, 0.0);
  const std::vector<double> zeros(hidden, 0.0);
  for (std::size_t k = 0; k < length; ++k) {
    std::size_t t = reverse ? length - 1 - k : k;
    const double* prev = k == 0 ? zeros.data()
                                : states.data() + (reverse ? t + 1 : t - 1) * hidden;
    double* h = states.data() + t * hidden;
    std::copy(block.bias.begin(), block.bias.end(), h);
    MatVecAdd(block.input, inputs.data() + t * dim, h);
    MatVecAdd(block.recurrent, prev, h);
    for (std::size_t i = 0; i < hidden; ++i) h[i] = std::tanh(h[i]);
  }
}

void Softmax2(const double* logits, double* probs) {
  double m = std::max(logits[0], logits[1]);
  double e0 = std::exp(logits[0] - m);
  double e1 = std::exp(logits[1] - m);
  double z = e0 + e1;
  probs[0] = e0 / z;
  probs[1] = e1 / z;
}

struct PassWithLogits {
  ForwardPass pass;
  std::vector<double> logits;  // T x 2
};

PassWithLogits RunForward(const TaggerModel& model,
                          const std::vector<std::string>& norms) {
  if (norms.empty()) {
    throw Error(ErrorKind::kEmptySequence, "cannot tag an empty sequence");
  }
  const std::size_t length = norms.size();
  const std::size_t dim = model.input_dim();
  const std::size_t hidden = model.hidden_size();
  const TaggerParameters& p = model.params();

  PassWithLogits out;
  ForwardPass& pass = out.pass;
  pass.length = length;
  pass.inputs.resize(length * dim);
  for (std::size_t t = 0; t < length; ++t) {
    model.embedding().Lookup(norms[t], std::span<double>(pass.inputs.data() + t * dim, dim));
  }
  RunDirection(p.forward, pass.inputs, length, dim, hidden, false, pass.forward);
  RunDirection(p.backward, pass.inputs, length, dim, hidden, true, pass.backward);

  out.logits.resize(length * kNumLabels);
  pass.probs.resize(length * kNumLabels);
  std::vector<double> joint(2 * hidden);
  for (std::size_t t = 0; t < length; ++t) {
    std::copy_n(pass.forward.data() + t * hidden, hidden, joint.begin());
    std::copy_n(pass.backward.data() + t * hidden, hidden, joint.begin() + hidden);
    double* z = out.logits.data() + t * kNumLabels;
    std::copy(p.output_bias.begin(), p.output_bias.end(), z);
    MatVecAdd(p.output, joint.data(), z);
    Softmax2(z, pass.probs.data() + t * kNumLabels);
  }
  return out;
}

std::size_t LabelIndex(Label label) { return label == Label::kKeyword ? 1 : 0; }

double CrossEntropy(const std::vector<double>& logits, const LabeledSequence& seq) {
  double total = 0.0;
  for (std::size_t t = 0; t < seq.labels.size(); ++t) {
    const double* z = logits.data() + t * kNumLabels;
    double m = std::max(z[0], z[1]);
    double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
    total += lse - z[LabelIndex(seq.labels[t])];
  }
  return total / static_cast<double>(seq.labels.size());
}

void CheckSequence(const LabeledSequence& seq) {
  if (seq.tokens.size() != seq.labels.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "sequence '" + seq.report_id + "' has mismatched labels");
  }
}

// Backpropagation through one recurrent direction. `upstream` holds dL/dh_t
// from the output layer.
void BackpropDirection(const RecurrentBlock& block, RecurrentBlock& grad,
                       const std::vector<double>& inputs,
                       const std::vector<double>& states,
                       const std::vector<double>& upstream, std::size_t length,
                       std::size_t dim, std::size_t hidden, bool reverse) {
  std::vector<double> carry(hidden, 0.0);
  std::vector<double> dpre(hidden);
  // Visit positions in the opposite order of the forward recurrence.
  for (std::size_t k = 0; k < length; ++k) {
    std::size_t t = reverse ? k : length - 1 - k;
    const double* h = states.data() + t * hidden;
    for (std::size_t i = 0; i < hidden; ++i) {
      double dh = upstream[t * hidden + i] + carry[i];
      dpre[i] = dh * (1.0 - h[i] * h[i]);
    }
    OuterAdd(grad.input, dpre.data(), inputs.data() + t * dim);
    for (std::size_t i = 0; i < hidden; ++i) grad.bias[i] += dpre[i];
    bool has_prev = reverse ? t + 1 < length : t > 0;
    if (has_prev) {
      const double* prev = states.data() + (reverse ? t + 1 : t - 1) * hidden;
      OuterAdd(grad.recurrent, dpre.data(), prev);
    }
    std::fill(carry.begin(), carry.end(), 0.0);
    MatTVecAdd(block.recurrent, dpre.data(), carry.data());
  }
}

}  // namespace

std::vector<std::string> Norms(const std::vector<Token>& tokens) {
  std::vector<std::string> norms;
  norms.reserve(tokens.size());
  for (const Token& t : tokens) norms.push_back(t.norm);
  return norms;
}

ForwardPass Forward(const TaggerModel& model, const std::vector<std::string>& norms) {
  return RunForward(model, norms).pass;
}

double SequenceLoss(const TaggerModel& model, const LabeledSequence& seq) {
  CheckSequence(seq);
  return CrossEntropy(RunForward(model, Norms(seq.tokens)).logits, seq);
}

LossAndGrads LossAndGradients(const TaggerModel& model, const LabeledSequence& seq) {
  CheckSequence(seq);
  PassWithLogits run = RunForward(model, Norms(seq.tokens));
  const ForwardPass& pass = run.pass;
  const std::size_t length = pass.length;
  const std::size_t dim = model.input_dim();
  const std::size_t hidden = model.hidden_size();
  const TaggerParameters& p = model.params();

  LossAndGrads out;
  out.loss = CrossEntropy(run.logits, seq);
  out.grads = TaggerParameters::Zeros(dim, hidden);
  TaggerParameters& g = out.grads;

  const double scale = 1.0 / static_cast<double>(length);
  std::vector<double> up_forward(length * hidden, 0.0);
  std::vector<double> up_backward(length * hidden, 0.0);
  std::vector<double> joint(2 * hidden);
  std::vector<double> djoint(2 * hidden);
  for (std::size_t t = 0; t < length; ++t) {
    double dz[kNumLabels];
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      double target = LabelIndex(seq.labels[t]) == k ? 1.0 : 0.0;
      dz[k] = (pass.probs[t * kNumLabels + k] - target) * scale;
    }
    std::copy_n(pass.forward.data() + t * hidden, hidden, joint.begin());
    std::copy_n(pass.backward.data() + t * hidden, hidden, joint.begin() + hidden);
    OuterAdd(g.output, dz, joint.data());
    for (std::size_t k = 0; k < kNumLabels; ++k) g.output_bias[k] += dz[k];
    std::fill(djoint.begin(), djoint.end(), 0.0);
    MatTVecAdd(p.output, dz, djoint.data());
    std::copy_n(djoint.begin(), hidden, up_forward.begin() + t * hidden);
    std::copy_n(djoint.begin() + hidden, hidden, up_backward.begin() + t * hidden);
  }
  BackpropDirection(p.forward, g.forward, pass.inputs, pass.forward, up_forward,
                    length, dim, hidden, false);
  BackpropDirection(p.backward, g.backward, pass.inputs, pass.backward,
                    up_backward, length, dim, hidden, true);
  return out;
}

double RelativeError(double analytic, double numeric) {
  return std::fabs(analytic - numeric) /
         std::max(1e-8, std::fabs(analytic) + std::fabs(numeric));
}

GradCheckResult GradCheck(const TaggerModel& model, const LabeledSequence& seq,
                          double step, double tolerance,
                          const GradientFn& gradient) {
  TaggerParameters analytic =
      gradient ? gradient(model, seq) : LossAndGradients(model, seq).grads;
  TaggerModel probe = model;
  auto probe_blocks = probe.mutable_params().Blocks();
  auto grad_blocks = std::as_const(analytic).Blocks();

  GradCheckResult result;
  for (std::size_t b = 0; b < TaggerParameters::kNumBlocks; ++b) {
    std::span<double> block = probe_blocks[b];
    for (std::size_t i = 0; i < block.size(); ++i) {
      const double original = block[i];
      block[i] = original + step;
      double plus = SequenceLoss(probe, seq);
      block[i] = original - step;
      double minus = SequenceLoss(probe, seq);
      block[i] = original;
      double numeric = (plus - minus) / (2.0 * step);
      double err = RelativeError(grad_blocks[b][i], numeric);
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_block = b;
        result.worst_index = i;
      }
    }
  }
  result.passed = result.max_relative_error <= tolerance;
  return result;
}

// ---------------------------------------------------------------------------
// Training and prediction

void TrainConfig::Validate() const {
  if (epochs < 1) throw Error(ErrorKind::kInvalidArgument, "epochs must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "learning rate must be > 0");
  }
  if (hidden_size < 1) {
    throw Error(ErrorKind::kInvalidArgument, "hidden size must be >= 1");
  }
  if (!(clip_norm > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "clip norm must be > 0");
  }
}

double TokenCounts::Precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double TokenCounts::Recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double TokenCounts::F1() const {
  double p = Precision(), r = Recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

std::vector<Label> PredictLabels(const TaggerModel& model,
                                 const std::vector<std::string>& norms) {
  if (norms.empty()) return {};
  ForwardPass pass = Forward(model, norms);
  std::vector<Label> labels(norms.size());
  for (std::size_t t = 0; t < norms.size(); ++t) {
    std::span<const double> p = pass.Probs(t);
    labels[t] = p[1] > p[0] ? Label::kKeyword : Label::kNonKeyword;
  }
  return labels;
}

TokenCounts EvaluateTokens(const TaggerModel& model,
                           const std::vector<LabeledSequence>& data) {
  TokenCounts counts;
  for (const LabeledSequence& seq : data) {
    std::vector<Label> predicted = PredictLabels(model, Norms(seq.tokens));
    for (std::size_t t = 0; t < predicted.size(); ++t) {
      bool gold = seq.labels[t] == Label::kKeyword;
      bool pred = predicted[t] == Label::kKeyword;
      if (gold && pred) ++counts.tp;
      if (!gold && pred) ++counts.fp;
      if (gold && !pred) ++counts.fn;
    }
  }
  return counts;
}

TrainResult Train(TaggerModel model, const std::vector<LabeledSequence>& train,
                  const std::vector<LabeledSequence>& validation,
                  const TrainConfig& cfg) {
  cfg.Validate();
  std::vector<const LabeledSequence*> usable;
  for (const LabeledSequence& seq : train) {
    CheckSequence(seq);
    if (!seq.tokens.empty()) usable.push_back(&seq);
  }
  if (usable.empty()) {
    throw Error(ErrorKind::kEmptyTrainingSet, "no non-empty training sequences");
  }
  std::vector<LabeledSequence> selection_set;
  for (const LabeledSequence& seq : validation.empty() ? train : validation) {
    if (!seq.tokens.empty()) selection_set.push_back(seq);
  }

  SplitMix64 rng(cfg.seed);
  std::vector<std::size_t> order(usable.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result{model, {}, 0};
  double best_f1 = -1.0;
  std::size_t since_best = 0;
  const double clip_sq = cfg.clip_norm * cfg.clip_norm;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    FisherYatesShuffle(order, rng);
    double total_loss = 0.0;
    for (std::size_t idx : order) {
      LossAndGrads lg = LossAndGradients(model, *usable[idx]);
      total_loss += lg.loss;
      double norm_sq = lg.grads.SquaredNorm();
      double factor = cfg.learning_rate;
      if (norm_sq > clip_sq) factor *= cfg.clip_norm / std::sqrt(norm_sq);
      auto params = model.mutable_params().Blocks();
      auto grads = std::as_const(lg.grads).Blocks();
      for (std::size_t b = 0; b < TaggerParameters::kNumBlocks; ++b) {
        for (std::size_t i = 0; i < params[b].size(); ++i) {
          params[b][i] -= factor * grads[b][i];
        }
      }
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = total_loss / static_cast<double>(usable.size());
    stats.validation_f1 = EvaluateTokens(model, selection_set).F1();
    result.history.push_back(stats);

    if (stats.validation_f1 > best_f1) {
      best_f1 = stats.validation_f1;
      result.model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

std::vector<std::string> PredictTerms(const TaggerModel& model, const Report& report) {
  TokenizedReport tokens = TokenizeReport(report);
  std::vector<Label> labels = PredictLabels(model, Norms(tokens.tokens));
  std::vector<std::string> terms;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const Token& tok = tokens.tokens[t];
    if (labels[t] != Label::kKeyword || tok.norm == kRedactionNorm) continue;
    bool repeat = t > 0 && labels[t - 1] == Label::kKeyword &&
                  tokens.tokens[t - 1].norm == tok.norm;
    if (!repeat) terms.push_back(tok.norm);
  }
  return terms;
}

}  // namespace radex
