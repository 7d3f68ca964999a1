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

#ifndef BRIDGEGRAM_CORPUS_H_
#define BRIDGEGRAM_CORPUS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bridgegram/common.h"

namespace bridgegram {

// Transparent hash so string_view lookups do not allocate.
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

// Splits a line into maximal runs of non-whitespace. Only ASCII whitespace
// (space, tab, CR, LF, VT, FF) separates tokens; the bytes inside a token
// are returned untouched.
std::vector<std::string> tokenize(std::string_view line);

struct VocabularyOptions {
  int min_count = 5;
  double subsample_t = 1e-4;
  std::size_t negative_table_size = 10'000'000;
};

struct WordEntry {
  std::string word;
  std::int64_t count = 0;
};

// Word inventory plus the sampling tables consumed by the trainer.
// Immutable once built.
class Vocabulary {
 public:
  static constexpr double kNegativePower = 0.75;
  // Cap on discard probabilities; even with t = 0 a word is kept now and then.
  static constexpr double kMaxDiscardProb = 0.9999;

  Vocabulary() = default;

  // Builds from words already sorted by the caller's ordering rule.
  // total_tokens is the number of retained tokens (sum of counts).
  Vocabulary(std::vector<WordEntry> words, const VocabularyOptions& options);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const WordEntry& entry(std::int32_t id) const { return words_[id]; }
  const std::string& word(std::int32_t id) const { return words_[id].word; }
  std::int64_t count(std::int32_t id) const { return words_[id].count; }
  std::span<const WordEntry> words() const { return words_; }
  std::int64_t total_tokens() const { return total_tokens_; }
  const VocabularyOptions& options() const { return options_; }

  // Returns the word id or -1.
  std::int32_t find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) >= 0; }

  double discard_prob(std::int32_t id) const { return discard_prob_[id]; }
  std::span<const std::int32_t> negative_table() const {
    return negative_table_;
  }

  // True with probability discard_prob(id).
  bool should_discard(std::int32_t id, Rng& rng) const;

  // Draws from the count^0.75 unigram table.
  std::int32_t sample_negative(Rng& rng) const {
    return negative_table_[uniform_index(rng, negative_table_.size())];
  }

  // `word<TAB>count` per line, descending count.
  void dump(std::ostream& out) const;

 private:
  std::vector<WordEntry> words_;
  std::unordered_map<std::string, std::int32_t, StringHash, std::equal_to<>>
      index_;
  std::int64_t total_tokens_ = 0;
  VocabularyOptions options_;
  std::vector<double> discard_prob_;
  std::vector<std::int32_t> negative_table_;
};

// Counts tokens, drops those below options.min_count and orders the rest by
// descending count, first occurrence breaking ties. Throws Error when nothing
// survives.
Vocabulary build_vocabulary(std::span<const std::string> tokens,
                            const VocabularyOptions& options);
Vocabulary build_vocabulary(std::span<const std::string> tokens,
                            int min_count);

// Streaming variant over a text file, one sentence per line.
Vocabulary build_vocabulary_from_file(const std::string& path,
                                      const VocabularyOptions& options);

// Corpus encoded as word ids, split into lines. Tokens missing from the
// vocabulary are dropped. Context windows never cross line boundaries.
struct EncodedCorpus {
  std::vector<std::int32_t> ids;
  std::vector<std::size_t> line_starts;  // size = lines + 1

  std::size_t num_lines() const {
    return line_starts.empty() ? 0 : line_starts.size() - 1;
  }
  std::span<const std::int32_t> line(std::size_t i) const {
    return {ids.data() + line_starts[i], line_starts[i + 1] - line_starts[i]};
  }
};

EncodedCorpus encode_corpus(const std::string& path, const Vocabulary& vocab);

}  // namespace bridgegram

#endif  // BRIDGEGRAM_CORPUS_H_
