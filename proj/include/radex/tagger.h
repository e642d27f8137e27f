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

#ifndef RADEX_TAGGER_H_
#define RADEX_TAGGER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "radex/corpus.h"
#include "radex/textprep.h"

namespace radex {

// Frozen word vectors. Lookup is total: unknown words get a vector generated
// from FNV-1a-64(word) seeding SplitMix64, one NextUniform(-0.25, 0.25) draw
// per component, so OOV vectors agree across runs and implementations.
class EmbeddingTable {
 public:
  static constexpr double kOovRange = 0.25;

  explicit EmbeddingTable(std::size_t dim);

  // GloVe-style text: "word v1 ... vdim" per line. Repeated words keep their
  // first vector and are tallied in duplicate_count().
  static EmbeddingTable Load(const std::filesystem::path& path, std::size_t dim);
  static EmbeddingTable Parse(std::istream& in, std::size_t dim);

  // Returns false (and stores nothing) if the word is already present.
  bool Add(std::string word, std::span<const double> vector);

  std::size_t dim() const { return dim_; }
  std::size_t vocab_size() const { return words_.size(); }
  std::size_t duplicate_count() const { return duplicates_; }
  bool Contains(std::string_view word) const;
  const std::vector<std::string>& words() const { return words_; }
  std::span<const double> Row(std::size_t index) const;

  void Lookup(std::string_view word, std::span<double> out) const;
  std::vector<double> Lookup(std::string_view word) const;
  static void OovVector(std::string_view word, std::span<double> out);

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.words_ == b.words_ && a.matrix_ == b.matrix_;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> matrix_;
  std::size_t duplicates_ = 0;
};

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// h_t = tanh(input * x_t + recurrent * h_prev + bias)
struct RecurrentBlock {
  Matrix input;      // hidden x dim
  Matrix recurrent;  // hidden x hidden
  std::vector<double> bias;

  friend bool operator==(const RecurrentBlock&, const RecurrentBlock&) = default;
};

inline constexpr std::size_t kNumLabels = 2;  // 0 = NONKEYWORD, 1 = KEYWORD

struct TaggerParameters {
  static constexpr std::size_t kNumBlocks = 8;
  static constexpr std::array<std::string_view, kNumBlocks> kBlockNames = {
      "forward.input",  "forward.recurrent",  "forward.bias",
      "backward.input", "backward.recurrent", "backward.bias",
      "output.weight",  "output.bias"};

  RecurrentBlock forward;
  RecurrentBlock backward;
  Matrix output;  // 2 x (2 * hidden), columns [forward | backward]
  std::vector<double> output_bias;

  static TaggerParameters Zeros(std::size_t dim, std::size_t hidden);

  // Fixed order matching kBlockNames; also the serialization order.
  std::array<std::span<double>, kNumBlocks> Blocks();
  std::array<std::span<const double>, kNumBlocks> Blocks() const;

  double SquaredNorm() const;
  bool AllFinite() const;

  friend bool operator==(const TaggerParameters&, const TaggerParameters&) = default;
};

class TaggerModel {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  // Parameters drawn uniformly from [-0.1, 0.1) by SplitMix64(seed), block by
  // block in Blocks() order.
  TaggerModel(EmbeddingTable embedding, std::size_t hidden_size, std::uint64_t seed);
  // All-zero parameters.
  static TaggerModel Zero(EmbeddingTable embedding, std::size_t hidden_size);

  const EmbeddingTable& embedding() const { return embedding_; }
  const TaggerParameters& params() const { return params_; }
  TaggerParameters& mutable_params() { return params_; }
  std::size_t hidden_size() const { return hidden_; }
  std::size_t input_dim() const { return embedding_.dim(); }
  std::uint64_t seed() const { return seed_; }

  // Layout, all integers and floats little-endian:
  //   "RADEXM1"  u32 version  u64 dim  u64 hidden  u64 seed  u64 vocab
  //   vocab x { u32 byte_length, bytes }
  //   vocab x dim f64 embedding rows
  //   parameter blocks as f64, in TaggerParameters::Blocks() order
  void Save(std::ostream& out) const;
  void SaveFile(const std::filesystem::path& path) const;
  static TaggerModel Load(std::istream& in);
  static TaggerModel LoadFile(const std::filesystem::path& path);

  friend bool operator==(const TaggerModel&, const TaggerModel&) = default;

 private:
  TaggerModel(EmbeddingTable embedding, std::size_t hidden_size,
              std::uint64_t seed, TaggerParameters params);

  EmbeddingTable embedding_;
  std::size_t hidden_;
  std::uint64_t seed_;
  TaggerParameters params_;
};

// Activations of one pass, all row-major with one row per position.
struct ForwardPass {
  std::size_t length = 0;
  std::vector<double> inputs;   // T x dim
  std::vector<double> forward;  // T x hidden
  std::vector<double> backward; // T x hidden
  std::vector<double> probs;    // T x 2

  std::span<const double> Probs(std::size_t t) const {
    return {probs.data() + t * kNumLabels, kNumLabels};
  }
};

ForwardPass Forward(const TaggerModel& model, const std::vector<std::string>& norms);

struct LossAndGrads {
  double loss = 0.0;
  TaggerParameters grads;
};

// Mean per-token cross-entropy and its gradient by backpropagation through
// time. Embeddings are frozen and get no gradient.
LossAndGrads LossAndGradients(const TaggerModel& model, const LabeledSequence& seq);
double SequenceLoss(const TaggerModel& model, const LabeledSequence& seq);

using GradientFn =
    std::function<TaggerParameters(const TaggerModel&, const LabeledSequence&)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  bool passed = true;
  std::size_t worst_block = 0;
  std::size_t worst_index = 0;
};

// |a - n| / max(1e-8, |a| + |n|)
double RelativeError(double analytic, double numeric);

// Central differences against the analytic gradient, parameter by parameter.
// `gradient` defaults to LossAndGradients.
GradCheckResult GradCheck(const TaggerModel& model, const LabeledSequence& seq,
                          double step, double tolerance,
                          const GradientFn& gradient = {});

struct TrainConfig {
  std::size_t epochs = 100;
  double learning_rate = 0.05;
  std::size_t hidden_size = 64;
  double clip_norm = 5.0;
  std::uint64_t seed = 0;
  std::size_t patience = 10;  // 0 disables early stopping

  void Validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_f1 = 0.0;

  friend bool operator==(const EpochStats&, const EpochStats&) = default;
};

struct TrainResult {
  TaggerModel model;
  std::vector<EpochStats> history;
  std::size_t best_epoch = 0;
};

// Per-sequence SGD with global-norm clipping over a SplitMix64(cfg.seed)
// shuffled order each epoch. Keeps the parameters of the epoch with the best
// validation micro-F1 (training-set F1 when `validation` is empty).
TrainResult Train(TaggerModel model, const std::vector<LabeledSequence>& train,
                  const std::vector<LabeledSequence>& validation,
                  const TrainConfig& cfg);

// Argmax per token; an exact 0.5/0.5 tie is NONKEYWORD.
std::vector<Label> PredictLabels(const TaggerModel& model,
                                 const std::vector<std::string>& norms);

struct TokenCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
  double Precision() const;
  double Recall() const;
  double F1() const;
};

// KEYWORD-class counts pooled over all tokens.
TokenCounts EvaluateTokens(const TaggerModel& model,
                           const std::vector<LabeledSequence>& data);

// Norms of KEYWORD tokens in text order. A repeat is dropped only when it
// sits at the very next token position; "xxxx" is never emitted.
std::vector<std::string> PredictTerms(const TaggerModel& model, const Report& report);

std::vector<std::string> Norms(const std::vector<Token>& tokens);

}  // namespace radex

#endif  // RADEX_TAGGER_H_
