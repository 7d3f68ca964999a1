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

#include "bridgegram/cli.h"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <ostream>

#include "bridgegram/corpus.h"
#include "bridgegram/denorm.h"
#include "bridgegram/eval.h"
#include "bridgegram/model.h"
#include "bridgegram/normalize.h"

namespace bridgegram {
namespace {

void configure_logging() {
  static bool done = false;
  if (!done) {
    spdlog::set_default_logger(spdlog::stderr_logger_mt("bridgegram"));
    done = true;
  }
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("BRIDGEGRAM_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    if (level != "info") spdlog::warn("unknown BRIDGEGRAM_LOG `{}`", level);
    spdlog::set_level(spdlog::level::info);
  }
}

void kv(std::ostream& out, std::string_view key, double value) {
  out << key << '\t' << format_probability(value) << '\n';
}
void kv(std::ostream& out, std::string_view key, std::string_view value) {
  out << key << '\t' << value << '\n';
}

const CLI::Validator kProbability = CLI::Range(0.0, 1.0);

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  configure_logging();
  CLI::App app{"Noise-resistant word embeddings with bridge-words", "bridgegram"};
  app.require_subcommand(1);

  // train
  TrainConfig config;
  std::string mode = "subword";
  std::string corpus, model_out, vectors_out;
  auto* train_cmd = app.add_subcommand("train", "Train a skipgram model");
  train_cmd->add_option("--mode", mode, "word-only, subword or bridge")
      ->check(CLI::IsMember({"word-only", "subword", "bridge"}))
      ->capture_default_str();
  train_cmd->add_option("--input", corpus, "Corpus, one sentence per line")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--output", model_out, "Binary model path")->required();
  train_cmd->add_option("--vectors", vectors_out, "Also write text vectors here");
  train_cmd->add_option("--dim", config.dim, "Embedding size")->capture_default_str();
  train_cmd->add_option("--window", config.window, "Max context offset")
      ->capture_default_str();
  train_cmd->add_option("--epochs", config.epochs, "Passes over the corpus")->capture_default_str();
  train_cmd->add_option("--lr", config.lr, "Initial learning rate")
      ->capture_default_str();
  train_cmd->add_option("--neg", config.negatives, "Negatives per pair")
      ->capture_default_str();
  train_cmd->add_option("--minn", config.minn, "Min n-gram length")
      ->capture_default_str();
  train_cmd->add_option("--maxn", config.maxn, "Max n-gram length")
      ->capture_default_str();
  train_cmd->add_option("--bucket", config.bucket, "N-gram hash rows")
      ->capture_default_str();
  train_cmd->add_option("--min-count", config.min_count, "Drop rarer words")->capture_default_str();
  train_cmd->add_option("--t", config.subsample_t, "Subsampling threshold")
      ->capture_default_str();
  train_cmd->add_option("--neg-table", config.negative_table_size,
                        "Negative table size")
      ->capture_default_str();
  train_cmd->add_option("--pb", config.p_b, "Bridge probability per occurrence")
      ->check(kProbability)
      ->capture_default_str();
  train_cmd->add_option("--lambda", config.lambda, "Bridge weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  train_cmd->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--threads", config.threads, "Worker threads")->capture_default_str();

  // eval-sim
  std::string model_path, dataset, oov = "zero-sim", unit = "word";
  bool details = false;
  auto* sim_cmd = app.add_subcommand("eval-sim", "Word or sentence similarity");
  sim_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--dataset", dataset, "first<TAB>second<TAB>score")
      ->required()
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--oov", oov, "zero-sim or skip")
      ->check(CLI::IsMember({"zero-sim", "skip"}))
      ->capture_default_str();
  sim_cmd->add_option("--unit", unit, "word or sentence pairs")
      ->check(CLI::IsMember({"word", "sentence"}))
      ->capture_default_str();
  sim_cmd->add_flag("--details", details, "Print per-pair scores first");

  // eval-outlier
  auto* outlier_cmd = app.add_subcommand("eval-outlier", "Outlier detection");
  outlier_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  outlier_cmd->add_option("--dataset", dataset, "Cluster blocks separated by ---")
      ->required()
      ->check(CLI::ExistingFile);

  // denorm
  std::vector<std::string> dicts, datasets;
  CorruptionConfig corruption;
  auto* denorm_cmd = app.add_subcommand("denorm", "Dictionary de-normalization");
  denorm_cmd->add_option("--dict", dicts, "noisy<TAB>standard files")
      ->required()
      ->check(CLI::ExistingFile);
  denorm_cmd->add_option("--dataset", datasets)->required()->check(CLI::ExistingFile);
  denorm_cmd->add_option("--pd", corruption.p_d, "Replacement probability")
      ->check(kProbability)
      ->capture_default_str();
  denorm_cmd->add_option("--runs", corruption.runs)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  denorm_cmd->add_option("--seed", corruption.seed)->capture_default_str();

  // corrupt-seg
  std::string arm = "join";
  corruption.p_j = 0.5;
  corruption.p_s = 0.1;
  auto* seg_cmd = app.add_subcommand("corrupt-seg", "Join/split corruption");
  seg_cmd->add_option("--dataset", datasets)->required()->check(CLI::ExistingFile);
  seg_cmd->add_option("--arm", arm, "join or split")
      ->check(CLI::IsMember({"join", "split"}))
      ->capture_default_str();
  seg_cmd->add_option("--pj", corruption.p_j, "Delimiter removal probability")
      ->check(kProbability)
      ->capture_default_str();
  seg_cmd->add_option("--ps", corruption.p_s, "Delimiter insertion probability")
      ->check(kProbability)
      ->capture_default_str();
  seg_cmd->add_option("--runs", corruption.runs)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  seg_cmd->add_option("--seed", corruption.seed)->capture_default_str();

  // nn
  std::string query;
  std::size_t k = 10;
  auto* nn_cmd = app.add_subcommand("nn", "Nearest vocabulary neighbors");
  nn_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  nn_cmd->add_option("--query", query)->required();
  nn_cmd->add_option("--k", k)->check(CLI::PositiveNumber)->capture_default_str();

  // bridges
  std::string word;
  bool show_normalized = false;
  auto* bridges_cmd = app.add_subcommand("bridges", "Print a word's bridge-words");
  bridges_cmd->add_option("word", word)->required();
  bridges_cmd->add_flag("--normalized", show_normalized,
                        "Print the normalized form first");

  // dump-vec
  std::string dump_out;
  bool dump_vocab = false;
  auto* dump_cmd = app.add_subcommand("dump-vec", "Export text vectors");
  dump_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  dump_cmd->add_option("--output", dump_out, "Destination (stdout if omitted)");
  dump_cmd->add_flag("--vocab", dump_vocab, "Dump word<TAB>count instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*train_cmd) {
      config.mode = parse_mode(mode);
      TrainStats stats;
      const EmbeddingModel model = train(corpus, config, &stats);
      model.save_binary(model_out);
      if (!vectors_out.empty()) save_vectors(model, vectors_out);
      kv(out, "mode", mode_name(config.mode));
      kv(out, "vocab", std::to_string(model.vocab().size()));
      kv(out, "tokens", std::to_string(stats.tokens));
      kv(out, "word_pairs", std::to_string(stats.word_pairs));
      kv(out, "bridge_pairs", std::to_string(stats.bridge_pairs));
      kv(out, "final_loss", stats.epoch_loss.back());
      kv(out, "seconds", stats.seconds);
    } else if (*sim_cmd) {
      const auto model = EmbeddingModel::load_binary(model_path);
      const auto ds = load_similarity_dataset(dataset);
      SimilarityResult r;
      if (unit == "sentence") {
        r = eval_sentence_similarity(model, ds);
      } else {
        if (details) {
          std::vector<float> a(model.dim()), b(model.dim());
          for (const auto& p : ds.pairs) {
            const bool ok = model.try_input_vector(p.first, a) &
                            model.try_input_vector(p.second, b);
            out << p.first << '\t' << p.second << '\t' << p.gold << '\t'
                << (ok ? format_probability(cosine(a, b)) : "oov") << '\n';
          }
        }
        r = eval_similarity(model, ds, parse_oov_policy(oov));
      }
      kv(out, "spearman", r.spearman);
      kv(out, "oov_rate", r.oov_rate);
      kv(out, "vocab_oov_rate", r.vocab_oov_rate);
      kv(out, "pairs", std::to_string(ds.pairs.size()));
      kv(out, "scored", std::to_string(r.scored));
    } else if (*outlier_cmd) {
      const auto model = EmbeddingModel::load_binary(model_path);
      const auto sets = load_outlier_sets(dataset);
      const auto r = eval_outliers(model, sets);
      kv(out, "accuracy", r.accuracy);
      kv(out, "tests", std::to_string(r.tests));
      kv(out, "oov_words", std::to_string(r.oov_words));
    } else if (*denorm_cmd) {
      const auto dict = load_dict(dicts);
      const auto r = denormalize_dataset(datasets, corruption, dict);
      for (std::size_t i = 0; i < r.outputs.size(); ++i) kv(out, "output", r.outputs[i]);
      for (const auto& m : r.manifests) kv(out, "manifest", m);
      kv(out, "unique_words", std::to_string(r.unique_words));
      kv(out, "covered_words", std::to_string(r.covered_words));
      kv(out, "coverage", r.coverage);
    } else if (*seg_cmd) {
      const auto which = arm == "join" ? SegmentationArm::kJoin : SegmentationArm::kSplit;
      const auto r = corrupt_segmentation_dataset(datasets, corruption, which);
      for (const auto& o : r.outputs) kv(out, "output", o);
      for (const auto& m : r.manifests) kv(out, "manifest", m);
    } else if (*nn_cmd) {
      const auto model = EmbeddingModel::load_binary(model_path);
      for (const auto& [w, c] : nearest_neighbors(model, query, k)) {
        out << w << '\t' << format_probability(c) << '\n';
      }
    } else if (*bridges_cmd) {
      const auto set = bridge_words(word);
      if (show_normalized) kv(out, "normalized", set.normalized);
      for (const auto& b : set.bridges) out << b << '\n';
    } else if (*dump_cmd) {
      const auto model = EmbeddingModel::load_binary(model_path);
      std::ofstream file;
      if (!dump_out.empty()) {
        file.open(dump_out);
        if (!file) throw Error("cannot write: " + dump_out);
      }
      std::ostream& dst = dump_out.empty() ? out : file;
      if (dump_vocab) {
        model.vocab().dump(dst);
      } else {
        save_vectors(model, dst);
      }
    }
  } catch (const std::exception& e) {
    err << "bridgegram: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace bridgegram
