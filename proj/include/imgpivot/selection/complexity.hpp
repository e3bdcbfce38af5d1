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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "imgpivot/corpus/caption.hpp"

namespace imgpivot::selection {

/// Granularity of the pairwise caption distance.
enum class EditUnit { character, token };

std::string_view to_string(EditUnit unit);
/// "char" or "token".
EditUnit parse_edit_unit(std::string_view text);

struct ScoringOptions {
  EditUnit edit_unit = EditUnit::character;
  unsigned jobs = 1;
};

/// Caption complexity of one image: total token count, summed per-caption
/// unique-token counts, summed pairwise edit distance, and their sum.
struct ComplexityScore {
  std::string image_id;
  std::int64_t length = 0;
  std::int64_t unique = 0;
  std::int64_t edits = 0;
  std::int64_t score = 0;

  bool operator==(const ComplexityScore&) const = default;
};

/// Levenshtein distance with unit costs, two-row DP.
template <typename Seq>
std::size_t edit_distance(const Seq& a, const Seq& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

/// Character-level distance between two UTF-8 strings, counted in code points.
std::size_t char_edit_distance(std::string_view a, std::string_view b);

/// Distance between two captions under the configured unit. Character mode
/// compares the normalized tokens joined by single spaces.
std::size_t caption_distance(const corpus::Caption& a, const corpus::Caption& b, EditUnit unit);

/// Throws EmptyCaptionSet for an empty set.
ComplexityScore complexity_score(const corpus::CaptionSet& captions, EditUnit unit = EditUnit::character);

/// Strict weak order used everywhere images are ranked: score, then id.
inline bool score_less(const ComplexityScore& a, const ComplexityScore& b) {
  if (a.score != b.score) return a.score < b.score;
  return a.image_id < b.image_id;
}

/// Scores every image; output is sorted by (score, image_id).
std::vector<ComplexityScore> score_corpus(const corpus::CaptionCorpus& corpus,
                                          const ScoringOptions& options = {});

/// The k lowest-scoring images, ascending by (score, image_id).
std::vector<ComplexityScore> rank_images(const corpus::CaptionCorpus& corpus, std::size_t k,
                                         const ScoringOptions& options = {});

/// Picks the k smallest of already computed scores.
std::vector<ComplexityScore> select_lowest(std::vector<ComplexityScore> scores, std::size_t k);

/// `image_id\tl\tw\te\td` per line, in the given order.
std::string write_scores_tsv(const std::vector<ComplexityScore>& scores);
std::vector<ComplexityScore> parse_scores_tsv(std::string_view content);

}  // namespace imgpivot::selection
