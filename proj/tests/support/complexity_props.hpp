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

// Randomized property trials for the caption complexity score.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "imgpivot/corpus/caption.hpp"
#include "imgpivot/corpus/text.hpp"
#include "imgpivot/selection/complexity.hpp"
#include "oracles.hpp"

namespace props {

namespace sel = imgpivot::selection;
using imgpivot::corpus::CaptionSet;

inline std::string random_caption(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {"a", "dog", "runs", "on", "grass", "the", "boy", "कुत्ता", "घास", "लाल"};
  std::string out;
  for (std::size_t n = 1 + rng() % 7; n > 0; --n) out += (out.empty() ? "" : " ") + words[rng() % words.size()];
  return out;
}

inline CaptionSet make_set(const std::vector<std::string>& texts) {
  CaptionSet s{"img", "en", {}};
  for (std::size_t k = 0; k < texts.size(); ++k) s.captions.emplace_back("img", "en", k, texts[k]);
  return s;
}

inline std::string describe(const sel::ComplexityScore& s) {
  return "(" + std::to_string(s.length) + "," + std::to_string(s.unique) + "," + std::to_string(s.edits) + "," +
         std::to_string(s.score) + ")";
}

/// Each trial checks one property, rotating through permutation invariance,
/// the duplicate delta and the metric axioms. Returns the violation count.
inline std::size_t complexity_trials(std::uint64_t seed, int trials, std::vector<std::string>& errors) {
  std::mt19937_64 rng(seed);
  std::size_t violations = 0;
  auto fail = [&](std::string what) {
    ++violations;
    if (errors.size() < 20) errors.push_back(std::move(what));
  };
  for (int trial = 0; trial < trials; ++trial) {
    const auto unit = rng() % 2 ? sel::EditUnit::character : sel::EditUnit::token;
    switch (trial % 3) {
      case 0: {
        std::vector<std::string> texts;
        for (std::size_t n = 1 + rng() % 6; n > 0; --n) texts.push_back(random_caption(rng));
        const auto base = sel::complexity_score(make_set(texts), unit);
        std::shuffle(texts.begin(), texts.end(), rng);
        const auto shuffled = sel::complexity_score(make_set(texts), unit);
        if (!(base.length == shuffled.length && base.unique == shuffled.unique && base.edits == shuffled.edits &&
              base.score == shuffled.score)) {
          fail("permutation changed " + describe(base) + " to " + describe(shuffled));
        }
        break;
      }
      case 1: {
        std::vector<std::string> texts;
        for (std::size_t n = 1 + rng() % 6; n > 0; --n) texts.push_back(random_caption(rng));
        const auto set = make_set(texts);
        const auto& c = set.captions[rng() % set.size()];
        const auto& toks = c.tokens();
        std::int64_t expected = std::int64_t(toks.size()) + std::int64_t(std::set(toks.begin(), toks.end()).size());
        for (const auto& other : set.captions) expected += std::int64_t(sel::caption_distance(c, other, unit));
        auto grown = texts;
        grown.push_back(c.raw_text());
        const auto delta = sel::complexity_score(make_set(grown), unit).score - sel::complexity_score(set, unit).score;
        if (delta != expected) {
          fail("duplicate delta " + std::to_string(delta) + " != " + std::to_string(expected));
        }
        break;
      }
      default: {
        const auto a = oracle::random_u32(rng, 5), b = oracle::random_u32(rng, 5), c = oracle::random_u32(rng, 5);
        const auto ab = sel::edit_distance(a, b), ba = sel::edit_distance(b, a);
        const auto bc = sel::edit_distance(b, c), ac = sel::edit_distance(a, c);
        if (ab != ba) fail("edit distance not symmetric");
        if ((ab == 0) != (a == b)) fail("edit distance zero iff equal violated");
        if (ac > ab + bc) fail("triangle inequality violated");
        if (ab != oracle::brute_edit_distance(a, b)) fail("edit distance differs from the recursion oracle");
        break;
      }
    }
  }
  return violations;
}

}  // namespace props
