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

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace imgpivot::corpus {

using Token = std::string;
using TokenList = std::vector<Token>;

/// Per-language tokenization rules.
struct LanguageProfile {
  std::string code;
  std::set<char32_t> sentence_terminators;
  bool case_folding = true;
};

/// Built-in profiles exist for "en" and "hi"; any other code gets the default
/// profile (case folding on, ASCII terminators) carrying that code.
LanguageProfile profile_for(std::string_view code);

/// Splits on Unicode whitespace, strips terminators and `,;:"'()` from both
/// ends of every token, lower-cases when the profile says so and drops tokens
/// that end up empty. Throws InvalidUtf8 on malformed input.
TokenList normalize(std::string_view raw_text, const LanguageProfile& profile);

bool is_valid_utf8(std::string_view text);

/// Throws Error(InvalidUtf8) on malformed input.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

/// Tokens joined by a single ASCII space.
std::string join_tokens(const TokenList& tokens);

/// True when the text has at least one non-whitespace code point.
bool has_visible_text(std::string_view text);

}  // namespace imgpivot::corpus
