// Copyright 2026 The imgpivot Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "imgpivot/corpus/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "imgpivot/error.hpp"

namespace imgpivot::corpus {

namespace {

constexpr char32_t kDanda = U'।';
constexpr char32_t kDoubleDanda = U'॥';

const std::u32string_view kExtraStrip = U",;:\"'()";

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

}  // namespace

LanguageProfile profile_for(std::string_view code) {
  LanguageProfile p;
  p.code = std::string(code);
  p.sentence_terminators = {U'.', U'!', U'?', U'|'};
  if (code == "en") {
    p.sentence_terminators.insert(kDanda);
    p.case_folding = true;
  } else if (code == "hi") {
    p.sentence_terminators.insert({kDanda, kDoubleDanda});
    p.case_folding = false;
  }
  return p;
}

bool is_valid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw Error(ErrorCode::InvalidUtf8,
                  "invalid UTF-8 sequence at byte " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool bad = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), bad);
    if (bad) throw Error(ErrorCode::InvalidUtf8, "unencodable code point");
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

TokenList normalize(std::string_view raw_text, const LanguageProfile& profile) {
  const std::u32string text = decode_utf8(raw_text);
  auto strippable = [&](char32_t c) {
    return profile.sentence_terminators.count(c) > 0 ||
           kExtraStrip.find(c) != std::u32string_view::npos;
  };

  TokenList tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    std::size_t end = i;
    while (start < end && strippable(text[start])) ++start;
    while (end > start && strippable(text[end - 1])) --end;
    if (start == end) continue;
    std::u32string word(text.substr(start, end - start));
    if (profile.case_folding) {
      for (char32_t& c : word) c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
    }
    tokens.push_back(encode_utf8(word));
  }
  return tokens;
}

std::string join_tokens(const TokenList& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

bool has_visible_text(std::string_view text) {
  for (char32_t c : decode_utf8(text)) {
    if (!is_space(c)) return true;
  }
  return false;
}

}  // namespace imgpivot::corpus
