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

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "bridgegram/model.h"

namespace bridgegram {
namespace {

struct WorkerStats {
  std::vector<double> loss;
  std::vector<double> bridge_loss;
  std::vector<std::int64_t> pairs;
  std::vector<std::int64_t> bridge_pairs;
  std::int64_t tokens = 0;
};

class Worker {
 public:
  Worker(EmbeddingModel& model, int id, const Trainer::BridgeTable* bridges,
         const EncodedCorpus& corpus, std::atomic<std::int64_t>& progress,
         std::int64_t planned)
      : model_(model),
        id_(id),
        trainer_(model, id, bridges),
        corpus_(corpus),
        progress_(progress),
        planned_(planned) {}

  WorkerStats run() {
    const auto& config = model_.config();
    const std::size_t lines = corpus_.num_lines();
    const auto threads = static_cast<std::size_t>(config.threads);
    const std::size_t begin = lines * id_ / threads;
    const std::size_t end = lines * (id_ + 1) / threads;

    WorkerStats stats;
    stats.loss.assign(config.epochs, 0.0);
    stats.bridge_loss.assign(config.epochs, 0.0);
    stats.pairs.assign(config.epochs, 0);
    stats.bridge_pairs.assign(config.epochs, 0);

    std::vector<std::int32_t> kept;
    std::vector<std::int32_t> targets;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      for (std::size_t l = begin; l < end; ++l) {
        const auto line = corpus_.line(l);
        const double done = static_cast<double>(progress_.load(std::memory_order_relaxed));
        const auto lr = static_cast<float>(
            config.lr * std::max(0.0, 1.0 - done / static_cast<double>(planned_)));

        kept.clear();
        for (const auto id : line) {
          if (!model_.vocab().should_discard(id, trainer_.rng())) kept.push_back(id);
        }
        const auto n = static_cast<std::int64_t>(kept.size());
        for (std::int64_t i = 0; i < n; ++i) {
          const auto reach = static_cast<std::int64_t>(
              1 + uniform_index(trainer_.rng(), config.window));
          targets.clear();
          for (std::int64_t j = std::max<std::int64_t>(0, i - reach);
               j <= std::min(n - 1, i + reach); ++j) {
            if (j != i) targets.push_back(kept[j]);
          }
          if (targets.empty()) continue;
          const auto c = trainer_.train_center(kept[i], targets, lr);
          stats.loss[epoch] += c.word_loss;
          stats.bridge_loss[epoch] += c.bridge_loss;
          stats.pairs[epoch] += c.word_pairs;
          stats.bridge_pairs[epoch] += c.bridge_pairs;
        }
        stats.tokens += static_cast<std::int64_t>(line.size());
        progress_.fetch_add(static_cast<std::int64_t>(line.size()),
                            std::memory_order_relaxed);
      }
      if (id_ == 0) {
        spdlog::debug("epoch {} done: loss {:.4f}", epoch + 1,
                      stats.pairs[epoch] ? stats.loss[epoch] / stats.pairs[epoch] : 0.0);
      }
    }
    return stats;
  }

 private:
  EmbeddingModel& model_;
  int id_;
  Trainer trainer_;
  const EncodedCorpus& corpus_;
  std::atomic<std::int64_t>& progress_;
  std::int64_t planned_;
};

}  // namespace

EmbeddingModel train(const std::string& corpus_path, const TrainConfig& config,
                     TrainStats* stats) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  Vocabulary vocab =
      build_vocabulary_from_file(corpus_path, config.vocabulary_options());
  spdlog::info("vocabulary: {} words, {} tokens", vocab.size(),
               vocab.total_tokens());
  EmbeddingModel model(std::move(vocab), config);
  const EncodedCorpus corpus = encode_corpus(corpus_path, model.vocab());

  Trainer::BridgeTable bridges;
  if (config.mode == Mode::kBridge) bridges = Trainer::BridgeTable(model);

  const auto planned = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(corpus.ids.size()) * config.epochs);
  std::atomic<std::int64_t> progress{0};
  const Trainer::BridgeTable* table =
      config.mode == Mode::kBridge ? &bridges : nullptr;

  std::vector<WorkerStats> results(config.threads);
  if (config.threads == 1) {
    results[0] = Worker(model, 0, table, corpus, progress, planned).run();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < config.threads; ++t) {
      pool.emplace_back([&, t] {
        results[t] = Worker(model, t, table, corpus, progress, planned).run();
      });
    }
    for (auto& th : pool) th.join();
  }

  TrainStats total;
  total.epoch_loss.assign(config.epochs, 0.0);
  total.epoch_bridge_loss.assign(config.epochs, 0.0);
  std::vector<std::int64_t> pairs(config.epochs, 0);
  std::vector<std::int64_t> bridge_pairs(config.epochs, 0);
  for (const auto& r : results) {
    for (int e = 0; e < config.epochs; ++e) {
      total.epoch_loss[e] += r.loss[e];
      total.epoch_bridge_loss[e] += r.bridge_loss[e];
      pairs[e] += r.pairs[e];
      bridge_pairs[e] += r.bridge_pairs[e];
    }
    total.tokens += r.tokens;
  }
  for (int e = 0; e < config.epochs; ++e) {
    if (pairs[e] > 0) total.epoch_loss[e] /= static_cast<double>(pairs[e]);
    if (bridge_pairs[e] > 0) {
      total.epoch_bridge_loss[e] /= static_cast<double>(bridge_pairs[e]);
    }
    total.word_pairs += pairs[e];
    total.bridge_pairs += bridge_pairs[e];
  }
  total.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  spdlog::info("trained {} model: {} pairs ({} bridge) in {:.1f}s, final loss {:.4f}",
               mode_name(config.mode), total.word_pairs, total.bridge_pairs,
               total.seconds, total.epoch_loss.back());
  if (stats != nullptr) *stats = std::move(total);
  return model;
}

}  // namespace bridgegram
