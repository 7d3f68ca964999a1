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

#include "bridgegram/denorm.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "bridgegram/corpus.h"
#include "bridgegram/normalize.h"

namespace bridgegram {
namespace {

bool is_number(std::string_view field) {
  if (field.empty()) return false;
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

std::string join_words(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest: " + path);
  for (const auto& [k, v] : kv) out << k << '\t' << v << '\n';
}

}  // namespace

const std::vector<std::string>* NormalizationDict::variants(
    std::string_view token) const {
  auto it = forward.find(lowercase(token));
  return it == forward.end() ? nullptr : &it->second;
}

NormalizationDict load_dict(std::span<const std::string> paths) {
  if (paths.empty()) throw Error("load_dict: no dictionary files given");
  NormalizationDict dict;
  std::size_t conflicts = 0;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dictionary: " + path);
    dict.source_names.push_back(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto fields = tokenize(line);
      if (fields.empty()) continue;
      if (fields.size() != 2) {
        throw ParseError(path, lineno, "expected `noisy<TAB>standard`");
      }
      const std::string& noisy = fields[0];
      const std::string standard = lowercase(fields[1]);
      if (lowercase(noisy) == standard) continue;
      auto [it, inserted] = dict.reverse.try_emplace(noisy, standard);
      if (!inserted && it->second != standard) {
        ++conflicts;
        spdlog::debug("{}:{}: `{}` already maps to `{}`, ignoring `{}`", path,
                      lineno, noisy, it->second, standard);
        continue;
      }
      dict.forward[standard].push_back(noisy);
    }
    if (in.bad()) throw Error("read error: " + path);
  }
  for (auto& [standard, vs] : dict.forward) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  }
  if (conflicts > 0) {
    spdlog::info("normalization dictionary: {} conflicting entries ignored",
                 conflicts);
  }
  return dict;
}

void CorruptionConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(std::string(name) + " must be in [0, 1]");
    }
  };
  prob(p_d, "p_d");
  prob(p_j, "p_j");
  prob(p_s, "p_s");
  if (runs < 1) throw Error("runs must be >= 1");
}

std::vector<std::string> denormalize_text(std::span<const std::string> tokens,
                                          const NormalizationDict& dict,
                                          double p_d, Rng& rng) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto* vs = dict.variants(t);
    if (vs != nullptr && !vs->empty() && bernoulli(rng, p_d)) {
      out.push_back((*vs)[uniform_index(rng, vs->size())]);
    } else {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<std::string> join_tokens(std::span<const std::string> tokens,
                                     double p_j, Rng& rng) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && bernoulli(rng, p_j)) {
      out.back() += tokens[i];
    } else {
      out.push_back(tokens[i]);
    }
  }
  return out;
}

std::vector<std::string> split_tokens(std::span<const std::string> tokens,
                                      double p_s, Rng& rng) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    const auto chars = utf8_chars(t);
    std::string piece;
    for (std::size_t i = 0; i < chars.size(); ++i) {
      if (i > 0 && bernoulli(rng, p_s)) {
        out.push_back(std::move(piece));
        piece.clear();
      }
      piece.append(chars[i]);
    }
    if (!piece.empty()) out.push_back(std::move(piece));
  }
  return out;
}

std::vector<std::string> corrupt_segmentation(
    std::span<const std::string> tokens, double p_j, double p_s, Rng& rng) {
  auto joined = join_tokens(tokens, p_j, rng);
  return split_tokens(joined, p_s, rng);
}

void transform_dataset_file(const std::string& in_path,
                            const std::string& out_path,
                            const TokenTransform& transform, Rng& rng) {
  std::ifstream in(in_path);
  if (!in) throw Error("cannot open dataset: " + in_path);
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write: " + out_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line == "---") {
      out << line << '\n';
      continue;
    }
    std::size_t start = 0;
    bool first = true;
    while (true) {
      const auto tab = line.find('\t', start);
      const std::string field = line.substr(start, tab - start);
      if (!first) out << '\t';
      first = false;
      const auto tokens = tokenize(field);
      if (tokens.empty() || is_number(field)) {
        out << field;
      } else {
        out << join_words(transform(tokens, rng));
      }
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + out_path);
}

void measure_coverage(std::span<const std::string> dataset_paths,
                      const NormalizationDict& dict, DenormReport& report) {
  std::set<std::string> words;
  for (const auto& path : dataset_paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset: " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (line == "---") continue;
      for (const auto& t : tokenize(line)) {
        if (!is_number(t)) words.insert(lowercase(t));
      }
    }
  }
  report.unique_words = words.size();
  report.covered_words = static_cast<std::size_t>(std::count_if(
      words.begin(), words.end(),
      [&](const std::string& w) { return dict.forward.contains(w); }));
  report.coverage = words.empty() ? 0.0
                                  : static_cast<double>(report.covered_words) /
                                        static_cast<double>(words.size());
}

std::string format_probability(double p) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), p);
  return std::string(buf, res.ptr);
}

DenormReport denormalize_dataset(std::span<const std::string> dataset_paths,
                                 const CorruptionConfig& config,
                                 const NormalizationDict& dict) {
  config.validate();
  DenormReport report;
  measure_coverage(dataset_paths, dict, report);
  const std::string tag = ".noise-" + format_probability(config.p_d);
  const TokenTransform transform = [&](std::span<const std::string> tokens,
                                       Rng& rng) {
    return denormalize_text(tokens, dict, config.p_d, rng);
  };
  for (int i = 0; i < config.runs; ++i) report.seeds.push_back(config.seed + i);

  for (const auto& path : dataset_paths) {
    std::vector<std::pair<std::string, std::string>> manifest = {
        {"source", path},
        {"p_d", format_probability(config.p_d)},
        {"runs", std::to_string(config.runs)},
        {"base_seed", std::to_string(config.seed)},
        {"unique_words", std::to_string(report.unique_words)},
        {"covered_words", std::to_string(report.covered_words)},
        {"coverage", format_probability(report.coverage)},
    };
    for (const auto& d : dict.source_names) manifest.emplace_back("dictionary", d);
    for (int i = 0; i < config.runs; ++i) {
      const std::string out = path + tag + "-run" + std::to_string(i);
      Rng rng(report.seeds[i]);
      transform_dataset_file(path, out, transform, rng);
      report.outputs.push_back(out);
      manifest.emplace_back("run" + std::to_string(i) + "_seed",
                            std::to_string(report.seeds[i]));
      manifest.emplace_back("run" + std::to_string(i) + "_output", out);
    }
    const std::string manifest_path = path + tag + ".manifest";
    write_manifest(manifest_path, manifest);
    report.manifests.push_back(manifest_path);
  }
  return report;
}

DenormReport corrupt_segmentation_dataset(
    std::span<const std::string> dataset_paths, const CorruptionConfig& config,
    SegmentationArm arm) {
  config.validate();
  DenormReport report;
  const double p_j = arm == SegmentationArm::kJoin ? config.p_j : 0.0;
  const double p_s = arm == SegmentationArm::kSplit ? config.p_s : 0.0;
  const std::string tag = arm == SegmentationArm::kJoin
                              ? ".join-" + format_probability(p_j)
                              : ".split-" + format_probability(p_s);
  const TokenTransform transform = [&](std::span<const std::string> tokens,
                                       Rng& rng) {
    return corrupt_segmentation(tokens, p_j, p_s, rng);
  };
  for (int i = 0; i < config.runs; ++i) report.seeds.push_back(config.seed + i);

  for (const auto& path : dataset_paths) {
    std::vector<std::pair<std::string, std::string>> manifest = {
        {"source", path},
        {"arm", arm == SegmentationArm::kJoin ? "join" : "split"},
        {"p_j", format_probability(p_j)},
        {"p_s", format_probability(p_s)},
        {"runs", std::to_string(config.runs)},
        {"base_seed", std::to_string(config.seed)},
    };
    for (int i = 0; i < config.runs; ++i) {
      const std::string out = path + tag + "-run" + std::to_string(i);
      Rng rng(report.seeds[i]);
      transform_dataset_file(path, out, transform, rng);
      report.outputs.push_back(out);
      manifest.emplace_back("run" + std::to_string(i) + "_seed",
                            std::to_string(report.seeds[i]));
      manifest.emplace_back("run" + std::to_string(i) + "_output", out);
    }
    const std::string manifest_path = path + tag + ".manifest";
    write_manifest(manifest_path, manifest);
    report.manifests.push_back(manifest_path);
  }
  return report;
}

}  // namespace bridgegram
