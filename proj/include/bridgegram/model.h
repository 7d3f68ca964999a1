// Copyright 2026 The Bridgegram Authors.
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

#ifndef BRIDGEGRAM_MODEL_H_
#define BRIDGEGRAM_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bridgegram/common.h"
#include "bridgegram/corpus.h"

namespace bridgegram {

enum class Mode : std::uint32_t { kWordOnly = 0, kSubword = 1, kBridge = 2 };

std::string_view mode_name(Mode mode);
// Accepts "word-only", "subword", "bridge".
Mode parse_mode(std::string_view name);

struct TrainConfig {
  Mode mode = Mode::kSubword;
  int dim = 100;
  int window = 5;
  int epochs = 5;
  double lr = 0.05;
  int negatives = 5;
  int minn = 3;
  int maxn = 6;
  std::int64_t bucket = 2'000'000;
  int min_count = 5;
  double subsample_t = 1e-4;
  double p_b = 1.0;
  double lambda = 1.0;
  std::uint64_t seed = 1;
  int threads = 1;
  std::int64_t negative_table_size = 10'000'000;

  // Throws Error when an invariant is violated.
  void validate() const;

  bool uses_subwords() const { return mode != Mode::kWordOnly; }
  VocabularyOptions vocabulary_options() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Character n-grams of `<word>` with length in [minn, maxn], ordered by
// start position then length. The whole wrapped word is always emitted
// last (when at least minn characters long), whether or not it exceeds
// maxn. Lengths count UTF-8 code points.
std::vector<std::string> char_ngrams(std::string_view word, int minn,
                                     int maxn);

// 32-bit FNV-1a over the bytes of `s`.
std::uint32_t fnv1a32(std::string_view s);

// Skipgram input/output matrices plus the vocabulary they index.
//
// Input rows [0, |V|) hold word vectors. In subword and bridge modes rows
// [|V|, |V| + bucket) follow, holding hashed n-gram vectors shared by words
// and bridge-words. Word-only models allocate no bucket rows.
class EmbeddingModel {
 public:
  // Initializes input rows uniformly in [-1/dim, 1/dim] and output rows to
  // zero, drawing from a stream derived from config.seed.
  EmbeddingModel(Vocabulary vocab, const TrainConfig& config);

  // Wraps existing matrices (used by persistence).
  EmbeddingModel(Vocabulary vocab, const TrainConfig& config, Matrix input,
                 Matrix output);

  const Vocabulary& vocab() const { return vocab_; }
  const TrainConfig& config() const { return config_; }
  Mode mode() const { return config_.mode; }
  int dim() const { return config_.dim; }

  Matrix& input() { return input_; }
  const Matrix& input() const { return input_; }
  Matrix& output() { return output_; }
  const Matrix& output() const { return output_; }

  // |V| + (fnv1a32(ngram) mod bucket).
  std::int32_t hash_ngram(std::string_view ngram) const;

  // Input rows composing an in-vocabulary word: its own row, followed by its
  // n-gram rows in subword and bridge modes.
  std::span<const std::int32_t> word_rows(std::int32_t id) const;

  // Input rows for an arbitrary token. Empty in word-only mode when the token
  // is out of vocabulary.
  std::vector<std::int32_t> token_rows(std::string_view token) const;

  // Bucket rows for a bridge-word: its n-grams plus the hashed `<bridge>`
  // unit. Bridge-words never own vocabulary rows.
  std::vector<std::int32_t> bridge_rows(std::string_view bridge) const;

  bool is_representable(std::string_view token) const;

  // Mean of the token's input rows. Throws OutOfVocabulary in word-only mode
  // for unknown tokens.
  std::vector<float> input_vector(std::string_view token) const;

  // Same as input_vector but reports absence instead of throwing; `out` must
  // have dim() entries. Returns false (and zero-fills) when unrepresentable.
  bool try_input_vector(std::string_view token, std::span<float> out) const;

  std::vector<float> bridge_input_vector(std::string_view bridge) const;

  // Averages input rows into `out`. Zero-fills when rows is empty.
  void average_rows(std::span<const std::int32_t> rows,
                    std::span<float> out) const;

  // Full model persistence: magic, version, config, vocabulary and both
  // matrices as little-endian float32. Round-trips bit-exactly.
  void save_binary(const std::string& path) const;
  void save_binary(std::ostream& out) const;
  static EmbeddingModel load_binary(const std::string& path);
  static EmbeddingModel load_binary(std::istream& in,
                                    const std::string& source = "<stream>");

 private:
  void index_subwords();

  Vocabulary vocab_;
  TrainConfig config_;
  Matrix input_;
  Matrix output_;
  // Flattened word_rows() lists.
  std::vector<std::int32_t> word_rows_;
  std::vector<std::size_t> word_row_starts_;
};

// Table-driven logistic function over [-8, 8], clamped outside.
float fast_sigmoid(float x);

// Loss and analytic gradients of one skipgram pair with fixed negatives,
// using the exact logistic function. Gradients are with respect to the
// composed input vector and each distinct output row touched; the gradient
// with respect to a single input row r is hidden * multiplicity(r) / |rows|.
struct PairGradient {
  double loss = 0.0;
  std::vector<double> hidden;
  std::vector<std::int32_t> output_ids;
  std::vector<std::vector<double>> output;
};

double pair_loss(const EmbeddingModel& model,
                 std::span<const std::int32_t> input_rows, std::int32_t target,
                 std::span<const std::int32_t> negatives);

PairGradient pair_gradient(const EmbeddingModel& model,
                           std::span<const std::int32_t> input_rows,
                           std::int32_t target,
                           std::span<const std::int32_t> negatives);

// Per-worker SGD state: RNG streams and scratch buffers. Several trainers
// may update one model concurrently (lock-free, racy by contract).
class Trainer {
 public:
  struct CenterStats {
    double word_loss = 0.0;
    double bridge_loss = 0.0;
    std::int64_t word_pairs = 0;
    std::int64_t bridge_pairs = 0;
  };

  // Bridge rows of every vocabulary word, computed once and shared.
  class BridgeTable {
   public:
    BridgeTable() = default;
    explicit BridgeTable(const EmbeddingModel& model);

    std::size_t num_bridges(std::int32_t word) const {
      return word_starts_[word + 1] - word_starts_[word];
    }
    std::span<const std::int32_t> rows(std::int32_t word,
                                       std::size_t j) const {
      const std::size_t b = word_starts_[word] + j;
      return {rows_.data() + row_starts_[b], row_starts_[b + 1] - row_starts_[b]};
    }
    bool empty() const { return word_starts_.empty(); }

   private:
    std::vector<std::int32_t> rows_;
    std::vector<std::size_t> row_starts_;
    std::vector<std::size_t> word_starts_;
  };

  // `worker` selects independent streams derived from the model seed.
  // `bridges` may be null outside bridge mode; the table must outlive the
  // trainer.
  Trainer(EmbeddingModel& model, int worker,
          const BridgeTable* bridges = nullptr);

  // Draws `negatives` ids from the unigram table, redrawing any that equal
  // the target.
  void draw_negatives(std::int32_t target, std::vector<std::int32_t>& out);

  // One positive plus sampled negatives: SGD on the involved output rows and
  // on every input row (each receives the gradient with respect to the
  // composed vector), scaled by lr * weight. Returns the unweighted loss.
  double pair_loss_and_update(std::span<const std::int32_t> input_rows,
                              std::int32_t target, float lr, float weight);

  // Same update with explicit negatives.
  double apply_pair(std::span<const std::int32_t> input_rows,
                    std::int32_t target,
                    std::span<const std::int32_t> negatives, float lr,
                    float weight);

  // Skipgram objective for one center occurrence. In bridge mode h ~
  // Bernoulli(p_b) is drawn once from the dedicated bridge stream; when set
  // and lambda > 0, every bridge-word of the center additionally predicts
  // each target with weight lambda.
  CenterStats train_center(std::int32_t center,
                           std::span<const std::int32_t> targets, float lr);

  Rng& rng() { return rng_; }
  Rng& bridge_rng() { return bridge_rng_; }

 private:
  EmbeddingModel& model_;
  const BridgeTable* bridges_;
  Rng rng_;
  Rng bridge_rng_;
  std::vector<float> hidden_;
  std::vector<float> grad_;
  std::vector<std::int32_t> negatives_;
};

struct TrainStats {
  std::vector<double> epoch_loss;  // mean unweighted word-pair loss
  std::vector<double> epoch_bridge_loss;
  std::int64_t word_pairs = 0;
  std::int64_t bridge_pairs = 0;
  std::int64_t tokens = 0;  // tokens processed, before subsampling
  double seconds = 0.0;
};

// Builds the vocabulary, initializes the model and runs skipgram SGD with a
// learning rate decaying linearly to zero. threads = 1 is deterministic.
EmbeddingModel train(const std::string& corpus_path, const TrainConfig& config,
                     TrainStats* stats = nullptr);

// Word -> vector table as stored in the text format.
struct WordVectors {
  int dim = 0;
  std::vector<std::string> words;
  Matrix vectors;

  std::optional<std::size_t> find(std::string_view word) const;
};

// Text format: `|V| dim` header then `word v1 ... v_dim` per vocabulary word,
// holding the composed input vector.
void save_vectors(const EmbeddingModel& model, const std::string& path);
void save_vectors(const EmbeddingModel& model, std::ostream& out);
WordVectors load_vectors(const std::string& path);
WordVectors load_vectors(std::istream& in,
                         const std::string& source = "<stream>");

}  // namespace bridgegram

#endif  // BRIDGEGRAM_MODEL_H_
