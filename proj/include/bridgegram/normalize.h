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

#ifndef BRIDGEGRAM_NORMALIZE_H_
#define BRIDGEGRAM_NORMALIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace bridgegram {

// Lowercases (simple case folding), strips combining marks after canonical
// decomposition, then collapses every run of an identical character to one
// occurrence. Input and output are UTF-8. Throws Error on an empty word.
//
//   normalize_word("Friéndd") == "friend"
//   normalize_word("success") == "suces"
std::string normalize_word(std::string_view word);

struct BridgeSet {
  std::string source;
  std::string normalized;
  // One single-character deletion of `normalized` per position, duplicates
  // removed keeping the first occurrence. Empty when `normalized` has a
  // single character.
  std::vector<std::string> bridges;
};

BridgeSet bridge_words(std::string_view word);

// Simple Unicode lowercase of every code point.
std::string lowercase(std::string_view text);

// Splits UTF-8 text into code points, each returned as its byte sequence.
// Invalid lead bytes are returned as single bytes.
std::vector<std::string_view> utf8_chars(std::string_view text);

}  // namespace bridgegram

#endif  // BRIDGEGRAM_NORMALIZE_H_
