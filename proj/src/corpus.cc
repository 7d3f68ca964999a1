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

#include "bridgegram/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace bridgegram {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

template <typename Visit>
void for_each_token(std::string_view line, Visit&& visit) {
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < n && !is_space(line[i])) ++i;
    if (i > start) visit(line.substr(start, i - start));
  }
}

// Accumulates counts while remembering first-occurrence order.
class Counter {
 public:
  void add(std::string_view token) {
    auto [it, inserted] =
        index_.try_emplace(std::string(token), entries_.size());
    if (inserted) entries_.push_back({it->first, 0});
    ++entries_[it->second].count;
  }

  Vocabulary finish(const VocabularyOptions& options) && {
    std::vector<WordEntry> kept;
    for (auto& e : entries_) {
      if (e.count >= options.min_count) kept.push_back(std::move(e));
    }
    if (kept.empty()) {
      throw Error("empty vocabulary: no token reaches min_count " +
                  std::to_string(options.min_count));
    }
    // Stable sort keeps first-occurrence order among equal counts.
    std::stable_sort(kept.begin(), kept.end(),
                     [](const WordEntry& a, const WordEntry& b) {
                       return a.count > b.count;
                     });
    return Vocabulary(std::move(kept), options);
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<WordEntry> entries_;
};

void check_options(const VocabularyOptions& options) {
  if (options.min_count < 1) throw Error("min_count must be >= 1");
  if (options.subsample_t < 0) throw Error("subsample threshold must be >= 0");
  if (options.negative_table_size < 1) {
    throw Error("negative table size must be >= 1");
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  for_each_token(line, [&](std::string_view t) { tokens.emplace_back(t); });
  return tokens;
}

Vocabulary::Vocabulary(std::vector<WordEntry> words,
                       const VocabularyOptions& options)
    : words_(std::move(words)), options_(options) {
  check_options(options_);
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i].word, static_cast<std::int32_t>(i)).second) {
      throw Error("duplicate vocabulary word: " + words_[i].word);
    }
    total_tokens_ += words_[i].count;
  }

  discard_prob_.resize(words_.size());
  const double t = options_.subsample_t;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const double f = static_cast<double>(words_[i].count) /
                     static_cast<double>(total_tokens_);
    double p = f <= t ? 0.0 : 1.0 - std::sqrt(t / f);
    discard_prob_[i] = std::clamp(p, 0.0, kMaxDiscardProb);
  }

  if (words_.empty()) return;
  double z = 0.0;
  for (const auto& w : words_) {
    z += std::pow(static_cast<double>(w.count), kNegativePower);
  }
  const double size = static_cast<double>(options_.negative_table_size);
  negative_table_.reserve(options_.negative_table_size + words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const double share =
        std::pow(static_cast<double>(words_[i].count), kNegativePower) / z;
    const auto copies =
        std::max<std::size_t>(1, std::llround(share * size));
    negative_table_.insert(negative_table_.end(), copies,
                           static_cast<std::int32_t>(i));
  }
}

std::int32_t Vocabulary::find(std::string_view word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

bool Vocabulary::should_discard(std::int32_t id, Rng& rng) const {
  const double p = discard_prob_[id];
  return p > 0.0 && uniform01(rng) < p;
}

void Vocabulary::dump(std::ostream& out) const {
  for (const auto& w : words_) out << w.word << '\t' << w.count << '\n';
}

Vocabulary build_vocabulary(std::span<const std::string> tokens,
                            const VocabularyOptions& options) {
  check_options(options);
  Counter counter;
  for (const auto& t : tokens) {
    if (!t.empty()) counter.add(t);
  }
  return std::move(counter).finish(options);
}

Vocabulary build_vocabulary(std::span<const std::string> tokens,
                            int min_count) {
  VocabularyOptions options;
  options.min_count = min_count;
  return build_vocabulary(tokens, options);
}

Vocabulary build_vocabulary_from_file(const std::string& path,
                                      const VocabularyOptions& options) {
  check_options(options);
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus: " + path);
  Counter counter;
  std::string line;
  while (std::getline(in, line)) {
    for_each_token(line, [&](std::string_view t) { counter.add(t); });
  }
  if (in.bad()) throw Error("read error: " + path);
  return std::move(counter).finish(options);
}

EncodedCorpus encode_corpus(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus: " + path);
  EncodedCorpus corpus;
  corpus.line_starts.push_back(0);
  std::string line;
  while (std::getline(in, line)) {
    for_each_token(line, [&](std::string_view t) {
      const std::int32_t id = vocab.find(t);
      if (id >= 0) corpus.ids.push_back(id);
    });
    if (corpus.ids.size() > corpus.line_starts.back()) {
      corpus.line_starts.push_back(corpus.ids.size());
    }
  }
  if (in.bad()) throw Error("read error: " + path);
  return corpus;
}

}  // namespace bridgegram
