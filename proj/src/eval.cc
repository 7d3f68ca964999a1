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

#include "bridgegram/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "bridgegram/corpus.h"

namespace bridgegram {
namespace {

double parse_score(const std::string& field, const std::string& source,
                   std::size_t line) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw ParseError(source, line, "score is not a finite number: " + field);
  }
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

SimilarityResult correlate(std::vector<double> model_scores,
                           std::vector<double> gold, std::size_t total,
                           std::size_t oov, std::size_t vocab_oov) {
  if (model_scores.size() < 2) {
    throw Error("fewer than two scorable pairs");
  }
  SimilarityResult r;
  r.spearman = spearman(model_scores, gold);
  r.scored = model_scores.size();
  r.oov_rate = static_cast<double>(oov) / static_cast<double>(total);
  r.vocab_oov_rate = static_cast<double>(vocab_oov) / static_cast<double>(total);
  return r;
}

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw Error("cosine: dimension mismatch (" + std::to_string(u.size()) +
                " vs " + std::to_string(v.size()) + ")");
  }
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("spearman: length mismatch");
  if (xs.size() < 2) throw Error("spearman: need at least two observations");
  const auto rx = fractional_ranks(xs);
  const auto ry = fractional_ranks(ys);
  const double n = static_cast<double>(rx.size());
  // Mean rank is (n + 1) / 2 regardless of ties.
  const double mean = 0.5 * (n + 1.0);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelation("spearman: constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SimilarityDataset load_similarity_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset: " + path);
  SimilarityDataset ds;
  ds.name = path;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(path, lineno, "expected `first<TAB>second<TAB>score`");
    }
    SimilarityPair p{trim(fields[0]), trim(fields[1]),
                     parse_score(trim(fields[2]), path, lineno)};
    if (p.first.empty() || p.second.empty()) {
      throw ParseError(path, lineno, "empty field");
    }
    ds.pairs.push_back(std::move(p));
  }
  if (ds.pairs.size() < 2) {
    throw Error(path + ": a similarity dataset needs at least two pairs");
  }
  return ds;
}

OovPolicy parse_oov_policy(std::string_view name) {
  if (name == "zero-sim") return OovPolicy::kZeroSim;
  if (name == "skip") return OovPolicy::kSkip;
  throw Error("unknown OOV policy: " + std::string(name));
}

SimilarityResult eval_similarity(const EmbeddingModel& model,
                                 const SimilarityDataset& dataset,
                                 OovPolicy policy) {
  std::vector<double> scores, gold;
  std::size_t oov = 0, vocab_oov = 0;
  std::vector<float> a(model.dim()), b(model.dim());
  for (const auto& p : dataset.pairs) {
    if (!model.vocab().contains(p.first) || !model.vocab().contains(p.second)) {
      ++vocab_oov;
    }
    const bool ok_a = model.try_input_vector(p.first, a);
    const bool ok_b = model.try_input_vector(p.second, b);
    if (!(ok_a && ok_b)) {
      ++oov;
      if (policy == OovPolicy::kSkip) continue;
      scores.push_back(0.0);
    } else {
      scores.push_back(cosine(a, b));
    }
    gold.push_back(p.gold);
  }
  return correlate(std::move(scores), std::move(gold), dataset.pairs.size(),
                   oov, vocab_oov);
}

std::vector<float> sentence_vector(const EmbeddingModel& model,
                                   std::span<const std::string> tokens) {
  if (tokens.empty()) throw Error("sentence_vector: empty token list");
  std::vector<float> sum(model.dim(), 0.0f);
  std::vector<float> v(model.dim());
  std::size_t used = 0;
  for (const auto& t : tokens) {
    if (!model.try_input_vector(t, v)) continue;
    for (int i = 0; i < model.dim(); ++i) sum[i] += v[i];
    ++used;
  }
  if (used > 1) {
    const float inv = 1.0f / static_cast<float>(used);
    for (auto& x : sum) x *= inv;
  }
  return sum;
}

SimilarityResult eval_sentence_similarity(const EmbeddingModel& model,
                                          const SimilarityDataset& dataset) {
  std::vector<double> scores, gold;
  std::size_t oov = 0, vocab_oov = 0;
  for (const auto& p : dataset.pairs) {
    const auto ta = tokenize(p.first);
    const auto tb = tokenize(p.second);
    bool all_rep = true, all_vocab = true;
    for (const auto* ts : {&ta, &tb}) {
      for (const auto& t : *ts) {
        all_rep = all_rep && model.is_representable(t);
        all_vocab = all_vocab && model.vocab().contains(t);
      }
    }
    oov += all_rep ? 0 : 1;
    vocab_oov += all_vocab ? 0 : 1;
    if (ta.empty() || tb.empty()) {
      scores.push_back(0.0);
    } else {
      scores.push_back(cosine(sentence_vector(model, ta), sentence_vector(model, tb)));
    }
    gold.push_back(p.gold);
  }
  return correlate(std::move(scores), std::move(gold), dataset.pairs.size(),
                   oov, vocab_oov);
}

std::vector<OutlierSet> load_outlier_sets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open outlier dataset: " + path);
  std::vector<OutlierSet> sets;
  OutlierSet current;
  bool in_outliers = false;
  std::size_t block_start = 0;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (current.cluster.empty() && current.outliers.empty() && !in_outliers) {
      return;
    }
    if (!in_outliers) throw ParseError(path, block_start, "block lacks `---`");
    if (current.cluster.size() < 2) {
      throw ParseError(path, block_start, "cluster needs at least two words");
    }
    if (current.outliers.empty()) {
      throw ParseError(path, block_start, "block has no outliers");
    }
    sets.push_back(std::move(current));
    current = {};
    in_outliers = false;
  };
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string word = trim(line);
    if (word.empty()) {
      flush();
      continue;
    }
    if (current.cluster.empty() && !in_outliers) block_start = lineno;
    if (word == "---") {
      if (in_outliers) throw ParseError(path, lineno, "duplicate `---`");
      in_outliers = true;
    } else if (in_outliers) {
      if (std::find(current.cluster.begin(), current.cluster.end(), word) !=
          current.cluster.end()) {
        throw ParseError(path, lineno, "outlier also listed in cluster: " + word);
      }
      current.outliers.push_back(word);
    } else {
      current.cluster.push_back(word);
    }
  }
  flush();
  if (sets.empty()) throw Error(path + ": no outlier sets");
  return sets;
}

std::size_t find_outlier(std::span<const std::vector<float>> vectors) {
  const std::size_t m = vectors.size();
  if (m < 3) throw Error("find_outlier: need at least three vectors");
  std::vector<double> sim(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      sim[i * m + j] = cosine(vectors[i], vectors[j]);
    }
  }
  const double pairs = static_cast<double>((m - 1) * (m - 2) / 2);
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t w = 0; w < m; ++w) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == w) continue;
      for (std::size_t j = i + 1; j < m; ++j) {
        if (j != w) total += sim[i * m + j];
      }
    }
    const double compactness = total / pairs;
    if (w == 0 || compactness > best_score) {
      best = w;
      best_score = compactness;
    }
  }
  return best;
}

OutlierPrediction detect_outlier(const EmbeddingModel& model,
                                 std::span<const std::string> cluster,
                                 const std::string& candidate) {
  if (cluster.size() < 2) throw Error("detect_outlier: cluster needs two words");
  std::vector<std::vector<float>> vectors;
  vectors.reserve(cluster.size() + 1);
  for (const auto& w : cluster) {
    vectors.emplace_back(model.dim());
    model.try_input_vector(w, vectors.back());
  }
  vectors.emplace_back(model.dim());
  model.try_input_vector(candidate, vectors.back());
  OutlierPrediction p;
  p.predicted_index = find_outlier(vectors);
  p.correct = p.predicted_index == cluster.size();
  return p;
}

OutlierResult eval_outliers(const EmbeddingModel& model,
                            std::span<const OutlierSet> sets) {
  OutlierResult r;
  std::size_t correct = 0;
  for (const auto& s : sets) {
    for (const auto& w : s.cluster) r.oov_words += model.is_representable(w) ? 0 : 1;
    for (const auto& o : s.outliers) {
      r.oov_words += model.is_representable(o) ? 0 : 1;
      correct += detect_outlier(model, s.cluster, o).correct ? 1 : 0;
      ++r.tests;
    }
  }
  if (r.tests == 0) throw Error("eval_outliers: no tests");
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.tests);
  return r;
}

NeighborIndex::NeighborIndex(const EmbeddingModel& model)
    : model_(model), unit_(model.vocab().size(), model.dim()) {
  for (std::size_t id = 0; id < model.vocab().size(); ++id) {
    auto row = unit_.row(id);
    model.average_rows(model.word_rows(static_cast<std::int32_t>(id)), row);
    double norm = 0.0;
    for (const float x : row) norm += static_cast<double>(x) * x;
    if (norm > 0) {
      const auto inv = static_cast<float>(1.0 / std::sqrt(norm));
      for (auto& x : row) x *= inv;
    }
  }
}

std::vector<std::pair<std::string, double>> NeighborIndex::query(
    std::span<const float> query, std::size_t k, std::int32_t exclude) const {
  if (k < 1) throw Error("nearest_neighbors: k must be >= 1");
  std::vector<std::pair<double, std::int32_t>> scored;
  scored.reserve(unit_.rows());
  for (std::size_t id = 0; id < unit_.rows(); ++id) {
    if (static_cast<std::int32_t>(id) == exclude) continue;
    scored.emplace_back(cosine(query, unit_.row(id)), static_cast<std::int32_t>(id));
  }
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n),
                    scored.end(), [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first
                                                : a.second < b.second;
                    });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back(model_.vocab().word(scored[i].second), scored[i].first);
  }
  return out;
}

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingModel& model, std::string_view query, std::size_t k) {
  const auto v = model.input_vector(query);
  return NeighborIndex(model).query(v, k, model.vocab().find(query));
}

}  // namespace bridgegram
