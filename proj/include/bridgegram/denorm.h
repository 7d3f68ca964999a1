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

#ifndef BRIDGEGRAM_DENORM_H_
#define BRIDGEGRAM_DENORM_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bridgegram/common.h"

namespace bridgegram {

// Noisy <-> standard word pairs merged from one or more dictionary files.
struct NormalizationDict {
  // Lowercased standard word -> noisy variants, sorted and unique.
  std::map<std::string, std::vector<std::string>, std::less<>> forward;
  // Noisy variant -> lowercased standard word.
  std::map<std::string, std::string, std::less<>> reverse;
  std::vector<std::string> source_names;

  // Variants for a token, matched case-insensitively; null when uncovered.
  const std::vector<std::string>* variants(std::string_view token) const;
  std::size_t num_pairs() const { return reverse.size(); }
};

// Each line is `noisy<TAB>standard` (any whitespace separates the two
// columns); blank lines are skipped. On conflicting reverse entries the first
// mapping wins and the conflict is logged. Throws ParseError on malformed
// lines and Error on an empty path list.
NormalizationDict load_dict(std::span<const std::string> paths);

struct CorruptionConfig {
  double p_d = 1.0;
  double p_j = 0.0;
  double p_s = 0.0;
  int runs = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

// Replaces each covered token, independently with probability p_d, by a
// variant drawn uniformly from its list. Token count is preserved.
std::vector<std::string> denormalize_text(std::span<const std::string> tokens,
                                          const NormalizationDict& dict,
                                          double p_d, Rng& rng);

// Removes each boundary between consecutive tokens with probability p_j.
std::vector<std::string> join_tokens(std::span<const std::string> tokens,
                                     double p_j, Rng& rng);

// Inserts a delimiter at each boundary between characters of a token with
// probability p_s.
std::vector<std::string> split_tokens(std::span<const std::string> tokens,
                                      double p_s, Rng& rng);

// Join pass with p_j followed by split pass with p_s. A pass with
// probability 0 draws nothing from rng. Experiments run the two arms
// separately (one probability zero).
std::vector<std::string> corrupt_segmentation(
    std::span<const std::string> tokens, double p_j, double p_s, Rng& rng);

using TokenTransform =
    std::function<std::vector<std::string>(std::span<const std::string>, Rng&)>;

// Rewrites a dataset file line by line. Tab-separated fields that parse as
// numbers and `---` separator lines are copied; every other field is
// tokenized, transformed and re-joined with single spaces.
void transform_dataset_file(const std::string& in_path,
                            const std::string& out_path,
                            const TokenTransform& transform, Rng& rng);

struct DenormReport {
  std::vector<std::string> outputs;
  std::vector<std::string> manifests;
  std::vector<std::uint64_t> seeds;
  std::size_t unique_words = 0;
  std::size_t covered_words = 0;
  double coverage = 0.0;
};

// Fraction of unique lowercased dataset words that the dictionary covers.
void measure_coverage(std::span<const std::string> dataset_paths,
                      const NormalizationDict& dict, DenormReport& report);

// Writes config.runs corrupted copies of every dataset next to it as
// `<file>.noise-<p_d>-run<i>` (run i seeded with seed + i), plus a
// `<file>.noise-<p_d>.manifest` of `key<TAB>value` lines.
DenormReport denormalize_dataset(std::span<const std::string> dataset_paths,
                                 const CorruptionConfig& config,
                                 const NormalizationDict& dict);

enum class SegmentationArm { kJoin, kSplit };

// Join or split copies: `<file>.join-<p_j>-run<i>` or
// `<file>.split-<p_s>-run<i>`, with a matching manifest.
DenormReport corrupt_segmentation_dataset(
    std::span<const std::string> dataset_paths, const CorruptionConfig& config,
    SegmentationArm arm);

// Shortest decimal form of a probability, as used in output suffixes.
std::string format_probability(double p);

}  // namespace bridgegram

#endif  // BRIDGEGRAM_DENORM_H_
