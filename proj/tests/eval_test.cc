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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_util.h"

namespace bridgegram {
namespace {

using testing::TempDir;

// Word-only model whose input rows are given explicitly.
EmbeddingModel fixed_model(const std::vector<std::string>& words,
                           const std::vector<std::vector<float>>& rows) {
  std::vector<WordEntry> entries;
  for (std::size_t i = 0; i < words.size(); ++i) {
    entries.push_back({words[i], static_cast<std::int64_t>(100 - i)});
  }
  VocabularyOptions vo;
  vo.min_count = 1;
  vo.negative_table_size = 1000;
  TrainConfig c;
  c.mode = Mode::kWordOnly;
  c.dim = static_cast<int>(rows.front().size());
  Matrix in(words.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), in.row(i).begin());
  }
  return EmbeddingModel(Vocabulary(std::move(entries), vo), c, std::move(in),
                        Matrix(words.size(), rows.front().size()));
}

TEST(Cosine, BasicCases) {
  const std::vector<float> a = {1, 0}, b = {0, 1}, c = {2, 0}, z = {0, 0};
  EXPECT_DOUBLE_EQ(cosine(a, b), 0.0);
  EXPECT_DOUBLE_EQ(cosine(a, c), 1.0);
  EXPECT_DOUBLE_EQ(cosine(a, std::vector<float>{-3, 0}), -1.0);
  EXPECT_DOUBLE_EQ(cosine(a, z), 0.0);
  EXPECT_NEAR(cosine(a, std::vector<float>{1, 1}), std::sqrt(0.5), 1e-12);
  EXPECT_THROW(cosine(a, std::vector<float>{1, 2, 3}), Error);
}

TEST(Cosine, StaysInRange) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    std::vector<float> u(7), v(7);
    for (auto& x : u) x = static_cast<float>(uniform01(rng) - 0.5);
    v = u;
    if (t % 2) for (auto& x : v) x *= 3.0f;
    const double c = cosine(u, v);
    EXPECT_LE(c, 1.0);
    EXPECT_GE(c, -1.0);
  }
}

TEST(Ranks, AverageTies) {
  const std::vector<double> xs = {3, 1, 3, 2, 3};
  EXPECT_EQ(fractional_ranks(xs), (std::vector<double>{4, 1, 4, 2, 4}));
}

// Oracle: Pearson correlation of brute-force average ranks, computed with
// sample means.
double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  auto rank = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (const double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = less + (equal + 1) / 2;
    }
    return r;
  };
  const auto rx = rank(x), ry = rank(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(Spearman, KnownValues) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(spearman(x, x), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0);
  // Monotone but nonlinear.
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{1, 8, 27, 64, 125}), 1.0);
  EXPECT_NEAR(spearman(x, std::vector<double>{2, 1, 4, 3, 5}), 0.8, 1e-12);
  EXPECT_THROW(spearman(x, std::vector<double>{1, 1, 1, 1, 1}), UndefinedCorrelation);
  EXPECT_THROW(spearman(std::vector<double>{1}, std::vector<double>{1}), Error);
  EXPECT_THROW(spearman(x, std::vector<double>{1, 2}), Error);
}

TEST(Spearman, MatchesOracleWithTies) {
  Rng rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 40);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(uniform_index(rng, 6));
      y[i] = uniform01(rng) < 0.5 ? static_cast<double>(uniform_index(rng, 4))
                                  : uniform01(rng);
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
        std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
      continue;
    }
    EXPECT_NEAR(spearman(x, y), spearman_oracle(x, y), 1e-9);
  }
}

TEST(Spearman, InvariantUnderIncreasingTransform) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(20), y(20), ty(20);
    for (std::size_t i = 0; i < 20; ++i) {
      x[i] = uniform01(rng);
      y[i] = uniform01(rng);
      ty[i] = 3.0 * y[i] + 7.0;
    }
    EXPECT_DOUBLE_EQ(spearman(x, y), spearman(x, ty));
    EXPECT_DOUBLE_EQ(spearman(x, y), spearman(y, x));
  }
}

TEST(SimilarityDataset, ParsesAndReportsLines) {
  TempDir dir;
  const auto ok = dir.write("ok.tsv", "a\tb\t1.5\r\n\nc\td\t-2\n");
  const auto ds = load_similarity_dataset(ok);
  ASSERT_EQ(ds.pairs.size(), 2u);
  EXPECT_EQ(ds.pairs[1].first, "c");
  EXPECT_DOUBLE_EQ(ds.pairs[1].gold, -2.0);

  const auto bad = dir.write("bad.tsv", "a\tb\t1\nc\td\n");
  try {
    load_similarity_dataset(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_similarity_dataset(dir.write("nan.tsv", "a\tb\tx\nc\td\t1\n")),
               ParseError);
  EXPECT_THROW(load_similarity_dataset(dir.file("missing.tsv")), Error);
}

class SimilarityEval : public ::testing::Test {
 protected:
  // cos(a,b)=1, cos(a,c)=0.6, cos(a,d)=0.
  EmbeddingModel model_ = fixed_model({"a", "b", "c", "d"},
                                      {{1, 0}, {2, 0}, {0.6f, 0.8f}, {0, 1}});
  SimilarityDataset ds_{"t",
                        {{"a", "b", 10}, {"a", "c", 6}, {"a", "d", 1}, {"a", "zz", 3}}};
};

TEST_F(SimilarityEval, ZeroSimKeepsOovPairs) {
  const auto r = eval_similarity(model_, ds_, OovPolicy::kZeroSim);
  EXPECT_EQ(r.scored, 4u);
  EXPECT_DOUBLE_EQ(r.oov_rate, 0.25);
  EXPECT_DOUBLE_EQ(r.vocab_oov_rate, 0.25);
  // Model scores {1, .6, 0, 0} against gold {10, 6, 1, 3}.
  const std::vector<double> m = {1, 0.6, 0, 0}, g = {10, 6, 1, 3};
  EXPECT_NEAR(r.spearman, spearman_oracle(m, g), 1e-12);
}

TEST_F(SimilarityEval, SkipDropsOovPairs) {
  const auto r = eval_similarity(model_, ds_, OovPolicy::kSkip);
  EXPECT_EQ(r.scored, 3u);
  EXPECT_DOUBLE_EQ(r.spearman, 1.0);
  EXPECT_DOUBLE_EQ(r.oov_rate, 0.25);
  EXPECT_EQ(parse_oov_policy("skip"), OovPolicy::kSkip);
  EXPECT_THROW(parse_oov_policy("drop"), Error);
}

TEST_F(SimilarityEval, SentenceVectorIsMeanOfKnownTokens) {
  const std::vector<std::string> toks = {"a", "d", "unknown"};
  const auto v = sentence_vector(model_, toks);
  EXPECT_FLOAT_EQ(v[0], 0.5f);
  EXPECT_FLOAT_EQ(v[1], 0.5f);
  const std::vector<std::string> none = {"x", "y"};
  EXPECT_EQ(sentence_vector(model_, none), (std::vector<float>{0, 0}));
  EXPECT_THROW(sentence_vector(model_, std::vector<std::string>{}), Error);

  const SimilarityDataset sents{"s", {{"a b", "b", 3}, {"a", "d", 1}, {"c a", "a", 2}}};
  const auto r = eval_sentence_similarity(model_, sents);
  EXPECT_DOUBLE_EQ(r.spearman, 1.0);
  EXPECT_EQ(r.scored, 3u);
}

// Brute-force compactness of the set with `w` removed.
double compactness_oracle(const std::vector<std::vector<float>>& vs, std::size_t w) {
  double total = 0;
  int count = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (i == j || i == w || j == w) continue;
      total += cosine(vs[i], vs[j]);
      ++count;
    }
  }
  return total / count;
}

TEST(Outliers, MatchesOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 3 + uniform_index(rng, 6);
    std::vector<std::vector<float>> vs(m, std::vector<float>(4));
    for (auto& v : vs) for (auto& x : v) x = static_cast<float>(uniform01(rng) - 0.3);
    std::size_t expect = 0;
    for (std::size_t w = 1; w < m; ++w) {
      if (compactness_oracle(vs, w) > compactness_oracle(vs, expect) + 1e-12) expect = w;
    }
    EXPECT_EQ(find_outlier(vs), expect);
  }
}

TEST(Outliers, PermutationMovesPrediction) {
  std::vector<std::vector<float>> vs = {{1, 0}, {0.9f, 0.1f}, {0.95f, 0.05f}, {0, 1}};
  EXPECT_EQ(find_outlier(vs), 3u);
  std::swap(vs[0], vs[3]);
  EXPECT_EQ(find_outlier(vs), 0u);
  // Identical vectors tie everywhere: lowest index wins.
  EXPECT_EQ(find_outlier(std::vector<std::vector<float>>(4, {1, 1})), 0u);
  EXPECT_THROW(find_outlier(std::vector<std::vector<float>>(2, {1, 1})), Error);
}

TEST(Outliers, LoadAndEvaluate) {
  TempDir dir;
  const auto path = dir.write("o.txt", "a\nb\n---\nd\nc\n\n\nb\nc\n---\na\n");
  const auto sets = load_outlier_sets(path);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].cluster, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(sets[0].outliers, (std::vector<std::string>{"d", "c"}));

  const auto model = fixed_model({"a", "b", "c", "d"},
                                 {{1, 0}, {0.9f, 0.1f}, {0.7f, 0.7f}, {0, 1}});
  const auto r = eval_outliers(model, sets);
  EXPECT_EQ(r.tests, 3u);
  // d is found, c is found among {a,b}, a is not the odd one in {b,c,a}.
  EXPECT_NEAR(r.accuracy, 2.0 / 3.0, 1e-12);
  EXPECT_TRUE(detect_outlier(model, sets[0].cluster, "d").correct);

  EXPECT_THROW(load_outlier_sets(dir.write("x.txt", "a\nb\n")), ParseError);
  EXPECT_THROW(load_outlier_sets(dir.write("y.txt", "a\n---\nb\n")), ParseError);
  EXPECT_THROW(load_outlier_sets(dir.write("z.txt", "a\nb\n---\na\n")), ParseError);
}

TEST(Neighbors, OrderedByCosineExcludingQuery) {
  const auto model = fixed_model({"a", "b", "c", "d", "e"},
                                 {{1, 0}, {0.6f, 0.8f}, {0.8f, 0.6f}, {0, 1}, {0.8f, 0.6f}});
  const auto nn = nearest_neighbors(model, "a", 3);
  ASSERT_EQ(nn.size(), 3u);
  EXPECT_EQ(nn[0].first, "c");  // ties with e; lower id first
  EXPECT_EQ(nn[1].first, "e");
  EXPECT_EQ(nn[2].first, "b");
  EXPECT_NEAR(nn[0].second, 0.8, 1e-6);
  EXPECT_GE(nn[0].second, nn[1].second);
  EXPECT_EQ(nearest_neighbors(model, "a", 100).size(), 4u);
  EXPECT_THROW(nearest_neighbors(model, "zz", 2), OutOfVocabulary);
  EXPECT_THROW(nearest_neighbors(model, "a", 0), Error);
}

}  // namespace
}  // namespace bridgegram
