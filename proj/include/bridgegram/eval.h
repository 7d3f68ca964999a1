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

#ifndef BRIDGEGRAM_EVAL_H_
#define BRIDGEGRAM_EVAL_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bridgegram/common.h"
#include "bridgegram/model.h"

namespace bridgegram {

// Correlation is undefined because one side is constant.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

// u.v / (|u||v|), or 0 when either norm is zero. Throws Error on a dimension
// mismatch.
double cosine(std::span<const float> u, std::span<const float> v);

// Ranks starting at 1; tied values share the mean of their rank range.
std::vector<double> fractional_ranks(std::span<const double> xs);

// Pearson correlation of fractional ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct SimilarityPair {
  std::string first;
  std::string second;
  double gold = 0.0;
};

struct SimilarityDataset {
  std::string name;
  std::vector<SimilarityPair> pairs;
};

// `first<TAB>second<TAB>score` per line. The same loader serves word pairs
// and sentence pairs (whitespace inside a field is kept).
SimilarityDataset load_similarity_dataset(const std::string& path);

enum class OovPolicy { kZeroSim, kSkip };
OovPolicy parse_oov_policy(std::string_view name);

struct SimilarityResult {
  double spearman = 0.0;
  // Pairs with a word the model cannot represent.
  double oov_rate = 0.0;
  // Pairs with a word missing from the training vocabulary.
  double vocab_oov_rate = 0.0;
  std::size_t scored = 0;
};

// Cosine between input vectors of each pair vs gold, by Spearman. Throws
// Error when fewer than two pairs can be scored.
SimilarityResult eval_similarity(const EmbeddingModel& model,
                                 const SimilarityDataset& dataset,
                                 OovPolicy policy = OovPolicy::kZeroSim);

// Bag-of-words mean of input vectors over representable tokens; the zero
// vector when none is representable. Throws Error on an empty list.
std::vector<float> sentence_vector(const EmbeddingModel& model,
                                   std::span<const std::string> tokens);

// Sentence-pair variant: both fields are tokenized and scored through
// sentence_vector + cosine.
SimilarityResult eval_sentence_similarity(const EmbeddingModel& model,
                                          const SimilarityDataset& dataset);

struct OutlierSet {
  std::vector<std::string> cluster;
  std::vector<std::string> outliers;
};

// Blank-line separated blocks: cluster words, a `---` line, outlier words.
std::vector<OutlierSet> load_outlier_sets(const std::string& path);

// Leave-one-out compactness: for each vector, the mean pairwise cosine of the
// others. Returns the index maximizing it, lowest index on ties.
std::size_t find_outlier(std::span<const std::vector<float>> vectors);

struct OutlierPrediction {
  std::size_t predicted_index = 0;
  bool correct = false;
};

// Tests `candidate` against `cluster` (at least two words). The candidate has
// index cluster.size() in the combined set. Unrepresentable words become zero
// vectors.
OutlierPrediction detect_outlier(const EmbeddingModel& model,
                                 std::span<const std::string> cluster,
                                 const std::string& candidate);

struct OutlierResult {
  double accuracy = 0.0;
  std::size_t tests = 0;
  std::size_t oov_words = 0;
};

OutlierResult eval_outliers(const EmbeddingModel& model,
                            std::span<const OutlierSet> sets);

// Unit-normalized vectors of every vocabulary word, for repeated queries.
class NeighborIndex {
 public:
  explicit NeighborIndex(const EmbeddingModel& model);

  // Top-k vocabulary words by cosine with `query`, excluding `exclude`
  // (a word id, or -1). Ties resolve to the lower word id.
  std::vector<std::pair<std::string, double>> query(
      std::span<const float> query, std::size_t k,
      std::int32_t exclude = -1) const;

 private:
  const EmbeddingModel& model_;
  Matrix unit_;
};

// Throws OutOfVocabulary for unknown queries on word-only models.
std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingModel& model, std::string_view query, std::size_t k);

}  // namespace bridgegram

#endif  // BRIDGEGRAM_EVAL_H_
