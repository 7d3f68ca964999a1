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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion on
// stdout and exits nonzero when any criterion fails. Progress goes to stderr.

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "acceptance/synthetic.h"
#include "bridgegram/corpus.h"
#include "bridgegram/denorm.h"
#include "bridgegram/eval.h"
#include "bridgegram/model.h"
#include "bridgegram/normalize.h"

namespace bg = bridgegram;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string workdir = "acceptance-work";
  std::string cli = "bridgegram";
  double noisy_corpus_mb = 10.0;
  double small_corpus_mb = 1.0;
  int dim = 50;
  int epochs = 10;
  std::int64_t bucket = 2'000'000;
  int seeds = 3;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Writes each verdict to stdout and to a report file in the work directory.
class Report {
 public:
  explicit Report(const std::string& path) : file_(path) {}

  void add(int id, bool pass, const std::string& what, const std::string& detail) {
    failures_ += pass ? 0 : 1;
    char head[64];
    std::snprintf(head, sizeof(head), "%s criterion %d: ", pass ? "PASS" : "FAIL", id);
    const std::string line = head + what + " [" + detail + "]\n";
    std::fputs(line.c_str(), stdout);
    std::fflush(stdout);
    file_ << line << std::flush;
  }
  int failures() const { return failures_; }

 private:
  std::ofstream file_;
  int failures_ = 0;
};

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::string run_command(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) {
    out += buf.data();
  }
  status = ::pclose(pipe);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// ---------------------------------------------------------------- 1

void criterion_bridges(const Options& opt, Report& report) {
  const auto start = Clock::now();
  int status = 0;
  const auto out = run_command("'" + opt.cli + "' bridges friend", status);
  std::set<std::string> got;
  std::istringstream lines(out);
  for (std::string line; std::getline(lines, line);) got.insert(line);
  const std::set<std::string> want = {"riend", "fiend", "frend", "frind", "fried", "frien"};
  bool pass = status == 0 && got == want;
  for (const char* w : {"time", "tome", "tame"}) {
    pass = pass && contains(bg::bridge_words(w).bridges, "tme");
  }
  pass = pass && bg::normalize_word("success") == "suces" &&
         bg::normalize_word("daaammn") == "damn";
  const double secs = seconds_since(start);
  pass = pass && secs < 1.0;
  report.add(1, pass, "bridge generation is exact",
             "cli_exit=" + std::to_string(status) + " bridges=" +
                 std::to_string(got.size()) + " time=" + fmt(secs, 3) + "s");
}

// ---------------------------------------------------------------- 2

// Independent gradient: central differences of the exact loss, divided by
// the perturbation actually stored in float.
double central_difference(bg::EmbeddingModel& m, float* param,
                          std::span<const std::int32_t> rows, std::int32_t target,
                          std::span<const std::int32_t> negs) {
  const float saved = *param;
  *param = saved + 1e-4f;
  const double up = *param;
  const double lu = bg::pair_loss(m, rows, target, negs);
  *param = saved - 1e-4f;
  const double down = *param;
  const double ld = bg::pair_loss(m, rows, target, negs);
  *param = saved;
  return (lu - ld) / (up - down);
}

void criterion_gradient(Report& report) {
  constexpr int kDim = 5;
  constexpr int kVocab = 8;
  constexpr int kBucket = 40;
  bg::Rng rng(20260101);
  double worst = 0.0;
  int instances = 0;
  for (; instances < 200; ++instances) {
    std::vector<bg::WordEntry> words;
    for (int i = 0; i < kVocab; ++i) words.push_back({"w" + std::to_string(i), 100 - i});
    bg::VocabularyOptions vo;
    vo.min_count = 1;
    vo.negative_table_size = 1000;
    bg::TrainConfig c;
    c.mode = bg::Mode::kBridge;
    c.dim = kDim;
    c.bucket = kBucket;
    bg::EmbeddingModel m(bg::Vocabulary(std::move(words), vo), c);
    for (auto* mat : {&m.input(), &m.output()}) {
      for (std::size_t i = 0; i < mat->size(); ++i) {
        mat->data()[i] = static_cast<float>(2.0 * bg::uniform01(rng) - 1.0);
      }
    }
    std::vector<std::int32_t> rows = {static_cast<std::int32_t>(bg::uniform_index(rng, kVocab))};
    const std::size_t extra = bg::uniform_index(rng, 6);
    for (std::size_t i = 0; i < extra; ++i) {
      rows.push_back(kVocab + static_cast<std::int32_t>(bg::uniform_index(rng, kBucket)));
    }
    const auto target = static_cast<std::int32_t>(bg::uniform_index(rng, kVocab));
    std::vector<std::int32_t> negs;
    const std::size_t k = 1 + bg::uniform_index(rng, 5);
    for (std::size_t i = 0; i < k; ++i) {
      negs.push_back(static_cast<std::int32_t>(bg::uniform_index(rng, kVocab)));
    }

    const auto g = bg::pair_gradient(m, rows, target, negs);
    std::vector<double> analytic, numeric;
    std::set<std::int32_t> distinct(rows.begin(), rows.end());
    for (const auto r : distinct) {
      const double mult =
          static_cast<double>(std::count(rows.begin(), rows.end(), r)) /
          static_cast<double>(rows.size());
      for (int d = 0; d < kDim; ++d) {
        analytic.push_back(g.hidden[d] * mult);
        numeric.push_back(central_difference(m, &m.input().row(r)[d], rows, target, negs));
      }
    }
    for (std::size_t o = 0; o < g.output_ids.size(); ++o) {
      for (int d = 0; d < kDim; ++d) {
        analytic.push_back(g.output[o][d]);
        numeric.push_back(
            central_difference(m, &m.output().row(g.output_ids[o])[d], rows, target, negs));
      }
    }
    double diff = 0.0, na = 0.0, nn = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
      na += analytic[i] * analytic[i];
      nn += numeric[i] * numeric[i];
    }
    const double scale = std::max({std::sqrt(na), std::sqrt(nn), 1e-12});
    worst = std::max(worst, std::sqrt(diff) / scale);
  }
  report.add(2, worst < 1e-3, "analytic gradients match finite differences",
             std::to_string(instances) + " instances, max relative error " +
                 sci(worst));
}

// ---------------------------------------------------------------- corpora

struct NoisyCorpus {
  bg::synthetic::Language language;
  std::vector<bg::synthetic::NoisyWord> noisy;
  std::string path;
};

bg::synthetic::LanguageOptions desk_language() {
  bg::synthetic::LanguageOptions lo;
  lo.topics = 200;
  lo.words_per_topic = 100;
  return lo;
}

NoisyCorpus make_noisy_corpus(const Options& opt) {
  NoisyCorpus c{bg::synthetic::Language(desk_language()), {}, opt.workdir + "/noisy.txt"};
  bg::Rng rng(11);
  c.noisy = bg::synthetic::pick_noisy_words(c.language, 50, 6, rng);
  const auto bytes = bg::synthetic::write_corpus(
      c.path, c.language, c.noisy, 0.3,
      static_cast<std::size_t>(opt.noisy_corpus_mb * 1e6), rng);
  bg::synthetic::write_dictionary(opt.workdir + "/noisy.dict", c.noisy);
  spdlog::info("noisy corpus: {} bytes, {} noisy words", bytes, c.noisy.size());
  return c;
}

std::string make_small_corpus(const Options& opt) {
  const auto path = opt.workdir + "/small.txt";
  bg::synthetic::Language lang(desk_language());
  bg::Rng rng(5);
  const auto noisy = bg::synthetic::pick_noisy_words(lang, 50, 6, rng);
  bg::synthetic::write_corpus(path, lang, noisy, 0.3,
                              static_cast<std::size_t>(opt.small_corpus_mb * 1e6), rng);
  return path;
}

bg::TrainConfig base_config(const Options& opt, bg::Mode mode, std::uint64_t seed) {
  bg::TrainConfig c;
  c.mode = mode;
  c.dim = opt.dim;
  c.epochs = opt.epochs;
  c.bucket = opt.bucket;
  c.p_b = 0.5;
  c.lambda = 0.1;
  c.seed = seed;
  c.threads = 1;
  return c;
}

bool bit_identical(const bg::Matrix& a, const bg::Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

// ---------------------------------------------------------------- 3

bg::EmbeddingModel criterion_reduction(const Options& opt, const std::string& corpus,
                                      Report& report) {
  const auto start = Clock::now();
  const auto sub = bg::train(corpus, base_config(opt, bg::Mode::kSubword, 1));
  auto c = base_config(opt, bg::Mode::kBridge, 1);
  c.p_b = 0.0;
  const auto bridge = bg::train(corpus, c);
  const bool same = bit_identical(sub.input(), bridge.input()) &&
                    bit_identical(sub.output(), bridge.output());
  const double secs = seconds_since(start);
  report.add(3, same && secs < 120.0, "bridge mode with p_b = 0 equals subword mode",
             std::string(same ? "bit-identical" : "matrices differ") + " on " +
                 fmt(opt.small_corpus_mb, 1) + " MB, time=" + fmt(secs, 1) + "s");
  return bridge;
}

// ---------------------------------------------------------------- 4

double held_out_cosine(const bg::EmbeddingModel& m, const NoisyCorpus& corpus) {
  std::vector<float> a(m.dim()), b(m.dim());
  double total = 0.0;
  int n = 0;
  for (const auto& nw : corpus.noisy) {
    m.try_input_vector(nw.standard, a);
    for (const auto& v : nw.held_out) {
      m.try_input_vector(v, b);
      total += bg::cosine(a, b);
      ++n;
    }
  }
  return total / n;
}

constexpr std::array<bg::Mode, 3> kModes = {bg::Mode::kWordOnly, bg::Mode::kSubword,
                                            bg::Mode::kBridge};

// Sentence-similarity files for criterion 8: clean, joined and split.
struct SegmentationFiles {
  std::string clean, joined, split;
};

SegmentationFiles make_segmentation_files(const Options& opt, const NoisyCorpus& corpus) {
  SegmentationFiles f;
  f.clean = opt.workdir + "/sts.tsv";
  bg::Rng rng(88);
  bg::synthetic::write_sentence_pairs(f.clean, corpus.language, 500, rng);
  const std::vector<std::string> datasets = {f.clean};
  bg::CorruptionConfig c;
  c.p_j = 0.5;
  c.p_s = 0.1;
  c.seed = 21;
  f.joined =
      bg::corrupt_segmentation_dataset(datasets, c, bg::SegmentationArm::kJoin).outputs[0];
  f.split =
      bg::corrupt_segmentation_dataset(datasets, c, bg::SegmentationArm::kSplit).outputs[0];
  return f;
}

double sentence_spearman(const bg::EmbeddingModel& m, const std::string& path) {
  return bg::eval_sentence_similarity(m, bg::load_similarity_dataset(path)).spearman;
}

// Sentence scores of one model: clean, joined, split.
using SentenceScores = std::array<double, 3>;
// Indexed [seed][mode].
using ScoreGrid = std::vector<std::array<SentenceScores, 3>>;

// Trains every mode for every seed. Models are scored for criteria 4 and 8
// as they finish and then released, so only one is resident at a time.
ScoreGrid criterion_noise(const Options& opt, const NoisyCorpus& corpus,
                          const SegmentationFiles& files, Report& report) {
  const auto start = Clock::now();
  std::array<double, 3> mean{};
  std::array<double, 3> seconds{};
  ScoreGrid grid(opt.seeds);
  for (int s = 0; s < opt.seeds; ++s) {
    for (std::size_t m = 0; m < kModes.size(); ++m) {
      bg::TrainStats stats;
      const auto model =
          bg::train(corpus.path, base_config(opt, kModes[m], 101 + s), &stats);
      const double cos = held_out_cosine(model, corpus);
      mean[m] += cos / opt.seeds;
      seconds[m] += stats.seconds / opt.seeds;
      grid[s][m] = {sentence_spearman(model, files.clean),
                    sentence_spearman(model, files.joined),
                    sentence_spearman(model, files.split)};
      spdlog::info("seed {} {}: held-out cosine {:.4f} ({:.1f}s)", s,
                   bg::mode_name(kModes[m]), cos, stats.seconds);
    }
  }
  const double secs = seconds_since(start);
  const bool pass = mean[2] - mean[1] >= 0.03 && mean[1] > mean[0] && secs <= 1800.0;
  report.add(4, pass, "bridge > subword + 0.03 > word-only on held-out variants",
             "word-only=" + fmt(mean[0]) + " subword=" + fmt(mean[1]) +
                 " bridge=" + fmt(mean[2]) + " margin=" + fmt(mean[2] - mean[1]) +
                 " train_s/model=" + fmt(seconds[0], 0) + "/" + fmt(seconds[1], 0) + "/" +
                 fmt(seconds[2], 0) + " time=" + fmt(secs / 60.0, 1) + "min");
  return grid;
}

// ---------------------------------------------------------------- 5

double rank_then_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double below = 0, tied = 0;
      for (const double w : v) {
        below += w < v[i] ? 1 : 0;
        tied += w == v[i] ? 1 : 0;
      }
      r[i] = below + (tied + 1.0) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

void criterion_spearman(Report& report) {
  bg::Rng rng(555);
  double worst = 0.0;
  int checked = 0, undefined_ok = 0, mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + bg::uniform_index(rng, 7);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(bg::uniform_index(rng, 5));
      y[i] = static_cast<double>(bg::uniform_index(rng, 5));
    }
    const double oracle = rank_then_pearson(x, y);
    if (std::isnan(oracle)) {
      try {
        bg::spearman(x, y);
        ++mismatches;
      } catch (const bg::UndefinedCorrelation&) {
        ++undefined_ok;
      }
      continue;
    }
    worst = std::max(worst, std::abs(bg::spearman(x, y) - oracle));
    ++checked;
  }
  bool monotone = true;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + bg::uniform_index(rng, 7);
    std::vector<double> x(n), up(n), down(n);
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += 1.0 + static_cast<double>(bg::uniform_index(rng, 3));
      x[i] = static_cast<double>(i);
      up[i] = acc;
      down[i] = -acc * acc;
    }
    monotone = monotone && bg::spearman(x, up) == 1.0 && bg::spearman(x, down) == -1.0;
  }
  report.add(5, worst <= 1e-12 && mismatches == 0 && monotone,
             "Spearman matches the rank-then-Pearson oracle",
             std::to_string(checked) + " defined + " + std::to_string(undefined_ok) +
                 " constant lists, max error " + sci(worst) + ", monotone " +
                 (monotone ? "exact" : "inexact"));
}

// ---------------------------------------------------------------- 6

std::size_t outlier_oracle(const std::vector<std::vector<float>>& vs) {
  // Leave-one-out compactness over all ordered pairs of the rest.
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < vs.size(); ++w) {
    double total = 0;
    double count = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = 0; j < vs.size(); ++j) {
        if (i == j || i == w || j == w) continue;
        double uv = 0, uu = 0, vv = 0;
        for (std::size_t d = 0; d < vs[i].size(); ++d) {
          uv += static_cast<double>(vs[i][d]) * vs[j][d];
          uu += static_cast<double>(vs[i][d]) * vs[i][d];
          vv += static_cast<double>(vs[j][d]) * vs[j][d];
        }
        total += uv / std::sqrt(uu * vv);
        count += 1;
      }
    }
    if (total / count > best_score) {
      best_score = total / count;
      best = w;
    }
  }
  return best;
}

void criterion_outlier(Report& report) {
  bg::Rng rng(666);
  int agree = 0;
  constexpr int kTrials = 500;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t n = 3 + bg::uniform_index(rng, 3);
    const std::size_t dim = 1 + bg::uniform_index(rng, 4);
    std::vector<std::vector<float>> vs(n, std::vector<float>(dim));
    for (auto& v : vs) {
      for (auto& x : v) x = static_cast<float>(bg::uniform01(rng) * 2.0 - 1.0);
    }
    std::vector<bg::WordEntry> entries;
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) {
      words.push_back("v" + std::to_string(i));
      entries.push_back({words.back(), static_cast<std::int64_t>(10 - i)});
    }
    bg::VocabularyOptions vo;
    vo.min_count = 1;
    vo.negative_table_size = 100;
    bg::TrainConfig c;
    c.mode = bg::Mode::kWordOnly;
    c.dim = static_cast<int>(dim);
    bg::Matrix in(n, dim);
    for (std::size_t i = 0; i < n; ++i) std::copy(vs[i].begin(), vs[i].end(), in.row(i).begin());
    const bg::EmbeddingModel model(bg::Vocabulary(std::move(entries), vo), c, std::move(in),
                                   bg::Matrix(n, dim));
    const std::vector<std::string> cluster(words.begin(), words.end() - 1);
    const auto p = bg::detect_outlier(model, cluster, words.back());
    agree += p.predicted_index == outlier_oracle(vs) ? 1 : 0;
  }
  report.add(6, agree == kTrials, "outlier detection matches brute-force compactness",
             std::to_string(agree) + "/" + std::to_string(kTrials) + " sets agree");
}

// ---------------------------------------------------------------- 7

void criterion_denorm(const Options& opt, Report& report) {
  const std::string dict_path = opt.workdir + "/denorm.dict";
  {
    std::ofstream d(dict_path);
    const std::vector<std::string> standard = {"friend", "people", "really", "tomorrow",
                                               "because", "please", "thanks", "love"};
    for (const auto& s : standard) {
      d << s.substr(0, s.size() - 1) << '\t' << s << '\n';
      d << s << s.back() << s.back() << '\t' << s << '\n';
    }
    const std::string corpus_path = opt.workdir + "/covered.txt";
    std::ofstream c(corpus_path);
    bg::Rng rng(77);
    for (int line = 0; line < 1000; ++line) {
      for (int i = 0; i < 10; ++i) {
        c << (i ? " " : "") << standard[bg::uniform_index(rng, standard.size())];
      }
      c << '\n';
    }
  }
  const std::vector<std::string> dicts = {dict_path};
  const std::vector<std::string> datasets = {opt.workdir + "/covered.txt"};
  const auto dict = bg::load_dict(dicts);
  const auto original = bg::tokenize(
      [&] {
        std::ifstream in(datasets[0]);
        return std::string(std::istreambuf_iterator<char>(in), {});
      }());

  bool pass = original.size() == 10'000;
  std::string detail;
  for (const double p : {0.3, 0.6, 1.0}) {
    bg::CorruptionConfig c;
    c.p_d = p;
    c.runs = 1;
    c.seed = 9;
    auto slurp = [](const std::string& path) {
      std::ifstream in(path);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const auto first = slurp(bg::denormalize_dataset(datasets, c, dict).outputs[0]);
    const auto second = slurp(bg::denormalize_dataset(datasets, c, dict).outputs[0]);
    const auto noisy = bg::tokenize(first);
    std::size_t replaced = 0;
    for (std::size_t i = 0; i < std::min(noisy.size(), original.size()); ++i) {
      replaced += noisy[i] != original[i] ? 1 : 0;
    }
    const double rate = static_cast<double>(replaced) / static_cast<double>(original.size());
    const bool ok = noisy.size() == original.size() && std::abs(rate - p) <= 0.02 &&
                    first == second && (p < 1.0 || replaced == original.size());
    pass = pass && ok;
    detail += (detail.empty() ? "" : " ") + std::string("p_d=") + bg::format_probability(p) +
              ":" + fmt(rate, 4);
  }
  report.add(7, pass, "de-normalization replacement rates track p_d",
             detail + " over " + std::to_string(original.size()) + " tokens, deterministic");
}

// ---------------------------------------------------------------- 8

void criterion_segmentation(const ScoreGrid& grid, Report& report) {
  int join_ok = 0, split_ok = 0;
  std::array<SentenceScores, 3> mean{};
  for (const auto& seed : grid) {
    std::array<double, 3> split{};
    bool degraded = true;
    for (std::size_t m = 0; m < 3; ++m) {
      for (std::size_t k = 0; k < 3; ++k) mean[k][m] += seed[m][k] / grid.size();
      split[m] = seed[m][2];
      degraded = degraded && seed[m][2] < seed[m][0];
    }
    join_ok += (seed[1][1] > seed[0][1] && seed[2][1] > seed[0][1]) ? 1 : 0;
    const auto [lo, hi] = std::minmax_element(split.begin(), split.end());
    split_ok += (degraded && *hi - *lo <= 0.10) ? 1 : 0;
  }
  const int n = static_cast<int>(grid.size());
  const int need = (2 * n + 2) / 3;
  auto triple = [](const SentenceScores& v) {
    return fmt(v[0], 3) + "/" + fmt(v[1], 3) + "/" + fmt(v[2], 3);
  };
  report.add(8, join_ok >= need && split_ok >= need,
             "join favors subword models, split levels all models",
             "word-only/subword/bridge clean=" + triple(mean[0]) + " join=" + triple(mean[1]) +
                 " split=" + triple(mean[2]) + " join_ok=" + std::to_string(join_ok) + "/" +
                 std::to_string(n) + " split_ok=" + std::to_string(split_ok) + "/" +
                 std::to_string(n));
}

// ---------------------------------------------------------------- 9

void criterion_throughput(const Options& opt, const std::string& corpus, Report& report) {
  bg::TrainStats sub, bridge;
  bg::train(corpus, base_config(opt, bg::Mode::kSubword, 1), &sub);
  auto c = base_config(opt, bg::Mode::kBridge, 1);
  c.p_b = 1.0;
  bg::train(corpus, c, &bridge);
  const double ratio = bridge.seconds / sub.seconds;
  report.add(9, ratio > 1.5, "bridge training (p_b = 1) is slower than subword",
             "subword=" + fmt(sub.seconds, 2) + "s bridge=" + fmt(bridge.seconds, 2) +
                 "s ratio=" + fmt(ratio, 2));
}

// ---------------------------------------------------------------- 10

void criterion_persistence(const Options& opt, const bg::EmbeddingModel& model,
                           Report& report) {
  const auto bin = opt.workdir + "/model.bin";
  const auto txt = opt.workdir + "/model.vec";
  model.save_binary(bin);
  const auto loaded = bg::EmbeddingModel::load_binary(bin);
  const bool binary_ok = bit_identical(model.input(), loaded.input()) &&
                         bit_identical(model.output(), loaded.output()) &&
                         loaded.config() == model.config() &&
                         loaded.vocab().size() == model.vocab().size();
  bg::save_vectors(model, txt);
  const auto wv = bg::load_vectors(txt);
  double worst = 0.0;
  bool words_ok = wv.words.size() == model.vocab().size();
  for (std::size_t i = 0; words_ok && i < wv.words.size(); ++i) {
    words_ok = wv.words[i] == model.vocab().word(static_cast<std::int32_t>(i));
    const auto v = model.input_vector(wv.words[i]);
    for (std::size_t d = 0; d < v.size(); ++d) {
      worst = std::max(worst, std::abs(static_cast<double>(v[d]) - wv.vectors.row(i)[d]));
    }
  }
  report.add(10, binary_ok && words_ok && worst <= 1e-5, "model persistence round-trips",
             std::string("binary ") + (binary_ok ? "bit-identical" : "differs") +
                 ", text max error " + sci(worst) + " over " +
                 std::to_string(wv.words.size()) + " words");
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Acceptance checks for bridgegram"};
  app.add_option("--workdir", opt.workdir, "Scratch directory")->capture_default_str();
  app.add_option("--cli", opt.cli, "Path to the bridgegram executable")->capture_default_str();
  app.add_option("--noisy-mb", opt.noisy_corpus_mb, "Noisy corpus size")->capture_default_str();
  app.add_option("--small-mb", opt.small_corpus_mb, "Reduction corpus size")
      ->capture_default_str();
  app.add_option("--dim", opt.dim)->capture_default_str();
  app.add_option("--epochs", opt.epochs)->capture_default_str();
  app.add_option("--bucket", opt.bucket)->capture_default_str();
  app.add_option("--seeds", opt.seeds)->check(CLI::PositiveNumber)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  fs::create_directories(opt.workdir);
  Report report(opt.workdir + "/report.txt");
  const auto log = [](const char* what) { std::fprintf(stderr, "[acceptance] %s\n", what); };

  criterion_bridges(opt, report);
  criterion_gradient(report);

  log("building corpora");
  const auto small = make_small_corpus(opt);
  const auto noisy = make_noisy_corpus(opt);

  log("mode reduction");
  const auto reduced = criterion_reduction(opt, small, report);

  log("noise robustness (trains every mode for each seed)");
  const auto segmentation = make_segmentation_files(opt, noisy);
  spdlog::set_level(spdlog::level::info);
  const auto scores = criterion_noise(opt, noisy, segmentation, report);
  spdlog::set_level(spdlog::level::warn);

  criterion_spearman(report);
  criterion_outlier(report);
  criterion_denorm(opt, report);

  criterion_segmentation(scores, report);

  log("throughput");
  criterion_throughput(opt, small, report);

  criterion_persistence(opt, reduced, report);

  std::fprintf(stderr, "[acceptance] %d criteria failed\n", report.failures());
  return report.failures() == 0 ? 0 : 1;
}
