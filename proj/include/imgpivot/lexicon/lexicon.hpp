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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imgpivot/align/aligner.hpp"

namespace imgpivot::lexicon {

using WordPair = std::pair<std::string, std::string>;  // (source word, target word)

/// Hard link counts tabulated from Viterbi alignments.
struct AlignmentCounts {
  std::map<WordPair, std::int64_t> counts;
  std::map<std::string, std::int64_t> src_totals;

  /// counts[(s, t)] / src_totals[s]; zero if s never aligned.
  double prob(const std::string& src, const std::string& tgt) const;

  /// Adds `n` (>= 1) links of (src, tgt), keeping src_totals consistent.
  void add(const std::string& src, const std::string& tgt, std::int64_t n = 1);
};

/// A (p, c) acceptance rule: an entry passes if count > c and prob > p.
struct ThresholdTier {
  double p = 0.0;
  std::int64_t c = 0;

  bool accepts(std::int64_t count, double prob) const { return count > c && prob > p; }
  bool operator==(const ThresholdTier&) const = default;
};

/// (0.5, 20), (0.6, 5), (0.9, 2).
std::vector<ThresholdTier> default_tiers();

/// Comma-separated `p:c` items, e.g. "0.5:20,0.6:5,0.9:2".
std::vector<ThresholdTier> parse_tiers(std::string_view text);
std::string format_tiers(const std::vector<ThresholdTier>& tiers);

struct DictionaryEntry {
  std::string src_word;
  std::string tgt_word;
  std::int64_t count = 0;
  double prob = 0.0;
  std::vector<ThresholdTier> tiers_matched;
};

/// Throws IndexOutOfRange when a link points past its sentence and
/// LengthMismatch when the alignment and the corpus differ in length.
AlignmentCounts count_alignments(const align::AlignmentData& alignments,
                                 const std::vector<align::SentencePair>& pairs);

/// Union over tiers; sorted by source word, then descending probability,
/// then target word. Throws InvalidArgument for an empty tier list.
std::vector<DictionaryEntry> extract_dictionary(const AlignmentCounts& counts,
                                                const std::vector<ThresholdTier>& tiers);

/// `src\ttgt\tcount\tprob\ttiers`.
std::string write_dictionary_tsv(const std::vector<DictionaryEntry>& entries);
std::vector<DictionaryEntry> parse_dictionary_tsv(std::string_view content);

using Judgments = std::map<WordPair, bool>;

/// `src\ttgt\t0|1`.
Judgments parse_judgments_tsv(std::string_view content);

struct PrecisionReport {
  std::size_t entries = 0;
  std::size_t judged = 0;
  std::size_t correct = 0;
  std::size_t unjudged = 0;
  /// correct / judged; empty when nothing was judged.
  std::optional<double> precision;

  /// "57.3% (43/75)" or "undefined (0/0)".
  std::string summary() const;
};

PrecisionReport score_dictionary(const std::vector<DictionaryEntry>& entries, const Judgments& judgments);

}  // namespace imgpivot::lexicon
