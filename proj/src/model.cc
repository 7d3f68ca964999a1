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

#include "bridgegram/model.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "bridgegram/normalize.h"

namespace bridgegram {
namespace {

constexpr int kSigmoidTableSize = 512;
constexpr float kMaxSigmoid = 8.0f;

const std::array<float, kSigmoidTableSize + 1>& sigmoid_table() {
  static const auto table = [] {
    std::array<float, kSigmoidTableSize + 1> t{};
    for (int i = 0; i <= kSigmoidTableSize; ++i) {
      const double x =
          (static_cast<double>(i) * 2.0 * kMaxSigmoid) / kSigmoidTableSize -
          kMaxSigmoid;
      t[i] = static_cast<float>(1.0 / (1.0 + std::exp(-x)));
    }
    return t;
  }();
  return table;
}

float dot(std::span<const float> a, std::span<const float> b) {
  float s = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(float alpha, std::span<const float> x, std::span<float> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

std::vector<double> mean_rows_double(const EmbeddingModel& model,
                                     std::span<const std::int32_t> rows) {
  std::vector<double> h(model.dim(), 0.0);
  for (const auto r : rows) {
    const auto v = model.input().row(r);
    for (int i = 0; i < model.dim(); ++i) h[i] += v[i];
  }
  for (auto& x : h) x /= static_cast<double>(rows.size());
  return h;
}

double exact_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(-x)) without overflow.
double softplus_neg(double x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

}  // namespace

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kWordOnly:
      return "word-only";
    case Mode::kSubword:
      return "subword";
    case Mode::kBridge:
      return "bridge";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  if (name == "word-only") return Mode::kWordOnly;
  if (name == "subword") return Mode::kSubword;
  if (name == "bridge") return Mode::kBridge;
  throw Error("unknown mode: " + std::string(name));
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("invalid config: ") + what);
  };
  require(dim >= 1, "dim must be >= 1");
  require(window >= 1, "window must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(lr > 0, "lr must be > 0");
  require(negatives >= 1, "negatives must be >= 1");
  require(min_count >= 1, "min_count must be >= 1");
  require(subsample_t >= 0, "subsample threshold must be >= 0");
  require(threads >= 1, "threads must be >= 1");
  require(negative_table_size >= 1, "negative table size must be >= 1");
  require(p_b >= 0 && p_b <= 1, "p_b must be in [0, 1]");
  require(lambda >= 0, "lambda must be >= 0");
  if (uses_subwords()) {
    require(minn >= 1, "minn must be >= 1");
    require(minn <= maxn, "minn must not exceed maxn");
    require(bucket >= 1 && bucket <= (1LL << 30), "bucket out of range");
  }
}

VocabularyOptions TrainConfig::vocabulary_options() const {
  VocabularyOptions o;
  o.min_count = min_count;
  o.subsample_t = subsample_t;
  o.negative_table_size = static_cast<std::size_t>(negative_table_size);
  return o;
}

std::vector<std::string> char_ngrams(std::string_view word, int minn,
                                     int maxn) {
  std::vector<std::string> out;
  if (word.empty() || minn < 1 || maxn < minn) return out;
  const std::string wrapped = "<" + std::string(word) + ">";
  const auto chars = utf8_chars(wrapped);
  const std::size_t len = chars.size();
  for (std::size_t i = 0; i < len; ++i) {
    std::string gram;
    for (std::size_t n = 1; n <= static_cast<std::size_t>(maxn) && i + n <= len;
         ++n) {
      gram.append(chars[i + n - 1]);
      if (n < static_cast<std::size_t>(minn)) continue;
      if (i == 0 && n == len) continue;  // whole word goes last
      if (n == 1 && (i == 0 || i + 1 == len)) continue;  // lone marker
      out.push_back(gram);
    }
  }
  if (len >= static_cast<std::size_t>(minn)) out.push_back(wrapped);
  return out;
}

std::uint32_t fnv1a32(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (const char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 16777619u;
  }
  return h;
}

float fast_sigmoid(float x) {
  if (x <= -kMaxSigmoid) return sigmoid_table().front();
  if (x >= kMaxSigmoid) return sigmoid_table().back();
  const auto i = static_cast<int>(std::lround(
      (x + kMaxSigmoid) * kSigmoidTableSize / (2.0f * kMaxSigmoid)));
  return sigmoid_table()[i];
}

EmbeddingModel::EmbeddingModel(Vocabulary vocab, const TrainConfig& config)
    : vocab_(std::move(vocab)), config_(config) {
  config_.validate();
  if (vocab_.empty()) throw Error("cannot build a model on an empty vocabulary");
  const std::size_t rows =
      vocab_.size() +
      (config_.uses_subwords() ? static_cast<std::size_t>(config_.bucket) : 0);
  input_ = Matrix(rows, config_.dim);
  output_ = Matrix(vocab_.size(), config_.dim);
  Rng rng(derive_seed(config_.seed, 0x696e6974));
  const float scale = 1.0f / static_cast<float>(config_.dim);
  float* data = input_.data();
  for (std::size_t i = 0; i < input_.size(); ++i) {
    data[i] = static_cast<float>(uniform01(rng) * 2.0 - 1.0) * scale;
  }
  index_subwords();
}

EmbeddingModel::EmbeddingModel(Vocabulary vocab, const TrainConfig& config,
                               Matrix input, Matrix output)
    : vocab_(std::move(vocab)),
      config_(config),
      input_(std::move(input)),
      output_(std::move(output)) {
  config_.validate();
  const std::size_t rows =
      vocab_.size() +
      (config_.uses_subwords() ? static_cast<std::size_t>(config_.bucket) : 0);
  if (input_.rows() != rows || input_.cols() != static_cast<std::size_t>(dim()) ||
      output_.rows() != vocab_.size() ||
      output_.cols() != static_cast<std::size_t>(dim())) {
    throw Error("matrix shapes do not match vocabulary and config");
  }
  index_subwords();
}

void EmbeddingModel::index_subwords() {
  word_rows_.clear();
  word_row_starts_.assign(1, 0);
  for (std::size_t id = 0; id < vocab_.size(); ++id) {
    word_rows_.push_back(static_cast<std::int32_t>(id));
    if (config_.uses_subwords()) {
      for (const auto& g :
           char_ngrams(vocab_.word(static_cast<std::int32_t>(id)), config_.minn,
                       config_.maxn)) {
        word_rows_.push_back(hash_ngram(g));
      }
    }
    word_row_starts_.push_back(word_rows_.size());
  }
}

std::int32_t EmbeddingModel::hash_ngram(std::string_view ngram) const {
  return static_cast<std::int32_t>(
      vocab_.size() + fnv1a32(ngram) % static_cast<std::uint32_t>(config_.bucket));
}

std::span<const std::int32_t> EmbeddingModel::word_rows(std::int32_t id) const {
  return {word_rows_.data() + word_row_starts_[id],
          word_row_starts_[id + 1] - word_row_starts_[id]};
}

std::vector<std::int32_t> EmbeddingModel::token_rows(
    std::string_view token) const {
  const std::int32_t id = vocab_.find(token);
  if (id >= 0) {
    const auto rows = word_rows(id);
    return {rows.begin(), rows.end()};
  }
  std::vector<std::int32_t> rows;
  if (!config_.uses_subwords() || token.empty()) return rows;
  for (const auto& g : char_ngrams(token, config_.minn, config_.maxn)) {
    rows.push_back(hash_ngram(g));
  }
  return rows;
}

std::vector<std::int32_t> EmbeddingModel::bridge_rows(
    std::string_view bridge) const {
  if (bridge.empty()) throw Error("empty bridge-word");
  if (!config_.uses_subwords()) {
    throw Error("bridge-words need subword rows; model is word-only");
  }
  auto grams = char_ngrams(bridge, config_.minn, config_.maxn);
  const std::string whole = "<" + std::string(bridge) + ">";
  if (grams.empty() || grams.back() != whole) grams.push_back(whole);
  std::vector<std::int32_t> rows;
  rows.reserve(grams.size());
  for (const auto& g : grams) rows.push_back(hash_ngram(g));
  return rows;
}

bool EmbeddingModel::is_representable(std::string_view token) const {
  return config_.uses_subwords() ? !token.empty() : vocab_.contains(token);
}

void EmbeddingModel::average_rows(std::span<const std::int32_t> rows,
                                  std::span<float> out) const {
  std::fill(out.begin(), out.end(), 0.0f);
  if (rows.empty()) return;
  for (const auto r : rows) axpy(1.0f, input_.row(r), out);
  const float inv = 1.0f / static_cast<float>(rows.size());
  for (auto& x : out) x *= inv;
}

std::vector<float> EmbeddingModel::input_vector(std::string_view token) const {
  std::vector<float> v(dim());
  if (!try_input_vector(token, v)) throw OutOfVocabulary(std::string(token));
  return v;
}

bool EmbeddingModel::try_input_vector(std::string_view token,
                                      std::span<float> out) const {
  if (!is_representable(token)) {
    std::fill(out.begin(), out.end(), 0.0f);
    return false;
  }
  average_rows(token_rows(token), out);
  return true;
}

std::vector<float> EmbeddingModel::bridge_input_vector(
    std::string_view bridge) const {
  std::vector<float> v(dim());
  average_rows(bridge_rows(bridge), v);
  return v;
}

double pair_loss(const EmbeddingModel& model,
                 std::span<const std::int32_t> input_rows, std::int32_t target,
                 std::span<const std::int32_t> negatives) {
  const auto h = mean_rows_double(model, input_rows);
  auto score = [&](std::int32_t t) {
    const auto o = model.output().row(t);
    double s = 0.0;
    for (int i = 0; i < model.dim(); ++i) s += h[i] * o[i];
    return s;
  };
  double loss = softplus_neg(score(target));
  for (const auto n : negatives) loss += softplus_neg(-score(n));
  return loss;
}

PairGradient pair_gradient(const EmbeddingModel& model,
                           std::span<const std::int32_t> input_rows,
                           std::int32_t target,
                           std::span<const std::int32_t> negatives) {
  const int dim = model.dim();
  const auto h = mean_rows_double(model, input_rows);
  PairGradient g;
  g.hidden.assign(dim, 0.0);
  std::map<std::int32_t, std::size_t> slot;
  auto visit = [&](std::int32_t t, double label) {
    const auto o = model.output().row(t);
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += h[i] * o[i];
    g.loss += label > 0 ? softplus_neg(s) : softplus_neg(-s);
    const double dscore = exact_sigmoid(s) - label;
    for (int i = 0; i < dim; ++i) g.hidden[i] += dscore * o[i];
    auto [it, inserted] = slot.try_emplace(t, g.output_ids.size());
    if (inserted) {
      g.output_ids.push_back(t);
      g.output.emplace_back(dim, 0.0);
    }
    auto& og = g.output[it->second];
    for (int i = 0; i < dim; ++i) og[i] += dscore * h[i];
  };
  visit(target, 1.0);
  for (const auto n : negatives) visit(n, 0.0);
  return g;
}

Trainer::BridgeTable::BridgeTable(const EmbeddingModel& model) {
  row_starts_.push_back(0);
  word_starts_.push_back(0);
  for (std::size_t id = 0; id < model.vocab().size(); ++id) {
    const auto set = bridge_words(model.vocab().word(static_cast<std::int32_t>(id)));
    for (const auto& b : set.bridges) {
      const auto rows = model.bridge_rows(b);
      rows_.insert(rows_.end(), rows.begin(), rows.end());
      row_starts_.push_back(rows_.size());
    }
    word_starts_.push_back(row_starts_.size() - 1);
  }
}

Trainer::Trainer(EmbeddingModel& model, int worker, const BridgeTable* bridges)
    : model_(model),
      bridges_(bridges),
      rng_(derive_seed(model.config().seed, 2 * static_cast<std::uint64_t>(worker) + 1)),
      bridge_rng_(derive_seed(model.config().seed,
                              2 * static_cast<std::uint64_t>(worker) + 2)),
      hidden_(model.dim()),
      grad_(model.dim()) {}

void Trainer::draw_negatives(std::int32_t target,
                             std::vector<std::int32_t>& out) {
  out.clear();
  const auto& vocab = model_.vocab();
  // A single-word vocabulary has nothing but the target to offer.
  const bool can_avoid_target = vocab.size() > 1;
  for (int i = 0; i < model_.config().negatives; ++i) {
    std::int32_t n = vocab.sample_negative(rng_);
    while (can_avoid_target && n == target) n = vocab.sample_negative(rng_);
    out.push_back(n);
  }
}

double Trainer::pair_loss_and_update(std::span<const std::int32_t> input_rows,
                                     std::int32_t target, float lr,
                                     float weight) {
  draw_negatives(target, negatives_);
  return apply_pair(input_rows, target, negatives_, lr, weight);
}

double Trainer::apply_pair(std::span<const std::int32_t> input_rows,
                           std::int32_t target,
                           std::span<const std::int32_t> negatives, float lr,
                           float weight) {
  model_.average_rows(input_rows, hidden_);
  std::fill(grad_.begin(), grad_.end(), 0.0f);
  const float alpha = lr * weight;
  double loss = 0.0;
  auto step = [&](std::int32_t t, bool positive) {
    auto out = model_.output().row(t);
    const float sig = fast_sigmoid(dot(hidden_, out));
    loss -= std::log(positive ? sig : 1.0f - sig);
    const float g = alpha * ((positive ? 1.0f : 0.0f) - sig);
    axpy(g, out, grad_);
    axpy(g, hidden_, out);
  };
  step(target, true);
  for (const auto n : negatives) step(n, false);
  for (const auto r : input_rows) axpy(1.0f, grad_, model_.input().row(r));
  return loss;
}

Trainer::CenterStats Trainer::train_center(
    std::int32_t center, std::span<const std::int32_t> targets, float lr) {
  CenterStats stats;
  const auto& config = model_.config();
  bool with_bridges = false;
  if (config.mode == Mode::kBridge) {
    // h comes from the bridge stream; the main stream is untouched by it.
    with_bridges = bernoulli(bridge_rng_, config.p_b) && config.lambda > 0 &&
                   bridges_ != nullptr && bridges_->num_bridges(center) > 0;
  }
  const auto rows = model_.word_rows(center);
  const auto lambda = static_cast<float>(config.lambda);
  for (const auto y : targets) {
    stats.word_loss += pair_loss_and_update(rows, y, lr, 1.0f);
    ++stats.word_pairs;
    if (!with_bridges) continue;
    for (std::size_t j = 0; j < bridges_->num_bridges(center); ++j) {
      stats.bridge_loss +=
          pair_loss_and_update(bridges_->rows(center, j), y, lr, lambda);
      ++stats.bridge_pairs;
    }
  }
  return stats;
}

std::optional<std::size_t> WordVectors::find(std::string_view word) const {
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i] == word) return i;
  }
  return std::nullopt;
}

}  // namespace bridgegram
