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

#include "bridgegram/normalize.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>

#include "bridgegram/common.h"

namespace bridgegram {
namespace {

const icu::Normalizer2& nfd() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFD normalizer unavailable");
    return n;
  }();
  return *instance;
}

const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
    return n;
  }();
  return *instance;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;
}

}  // namespace

std::vector<std::string_view> utf8_chars(std::string_view text) {
  std::vector<std::string_view> chars;
  chars.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = utf8_length(static_cast<unsigned char>(text[i]));
    len = std::min(len, text.size() - i);
    chars.push_back(text.substr(i, len));
    i += len;
  }
  return chars;
}

std::string lowercase(std::string_view text) {
  const icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString lowered;
  for (int32_t i = 0; i < input.length();) {
    const UChar32 c = input.char32At(i);
    lowered.append(u_tolower(c));
    i += U16_LENGTH(c);
  }
  std::string out;
  lowered.toUTF8String(out);
  return out;
}

std::string normalize_word(std::string_view word) {
  if (word.empty()) throw Error("cannot normalize an empty word");

  const icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(word.data(), static_cast<int32_t>(word.size())));

  icu::UnicodeString folded;
  for (int32_t i = 0; i < input.length();) {
    const UChar32 c = input.char32At(i);
    folded.append(u_foldCase(c, U_FOLD_CASE_DEFAULT));
    i += U16_LENGTH(c);
  }

  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString decomposed = nfd().normalize(folded, status);
  if (U_FAILURE(status)) throw Error("NFD normalization failed");

  icu::UnicodeString stripped;
  for (int32_t i = 0; i < decomposed.length();) {
    const UChar32 c = decomposed.char32At(i);
    if (u_charType(c) != U_NON_SPACING_MARK) stripped.append(c);
    i += U16_LENGTH(c);
  }
  // Recompose what is left (e.g. Hangul jamo) so characters are counted as
  // users see them.
  const icu::UnicodeString composed = nfc().normalize(stripped, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");

  icu::UnicodeString collapsed;
  UChar32 previous = U_SENTINEL;
  for (int32_t i = 0; i < composed.length();) {
    const UChar32 c = composed.char32At(i);
    if (c != previous) collapsed.append(c);
    previous = c;
    i += U16_LENGTH(c);
  }

  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

BridgeSet bridge_words(std::string_view word) {
  BridgeSet set;
  set.source = std::string(word);
  set.normalized = normalize_word(word);

  const auto chars = utf8_chars(set.normalized);
  if (chars.size() < 2) return set;
  set.bridges.reserve(chars.size());
  for (std::size_t skip = 0; skip < chars.size(); ++skip) {
    std::string bridge;
    bridge.reserve(set.normalized.size());
    for (std::size_t j = 0; j < chars.size(); ++j) {
      if (j != skip) bridge.append(chars[j]);
    }
    if (std::find(set.bridges.begin(), set.bridges.end(), bridge) ==
        set.bridges.end()) {
      set.bridges.push_back(std::move(bridge));
    }
  }
  return set;
}

}  // namespace bridgegram
