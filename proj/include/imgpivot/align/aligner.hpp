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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "imgpivot/corpus/text.hpp"

namespace imgpivot::align {

enum class AlignModel {
  model1,    // uniform distortion over NULL and every source position
  diagonal,  // fast_align-style diagonal prior with a fixed tension
};

std::string_view to_string(AlignModel model);
AlignModel parse_model(std::string_view text);

struct AlignerConfig {
  AlignModel model = AlignModel::diagonal;
  int iterations = 5;
  double diagonal_tension = 4.0;
  double null_prob = 0.08;
  double prob_floor = 1e-12;
  /// E-step worker threads. Results do not depend on this value.
  unsigned jobs = 1;
};

/// Throws InvalidConfig when a field is out of range.
void validate(const AlignerConfig& config);

/// Sentences longer than this are skipped at ingestion.
inline constexpr std::size_t kMaxSentenceLength = 200;

using WordId = std::uint32_t;

/// Bidirectional token <-> id table.
class Vocab {
 public:
  WordId intern(const std::string& word);
  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
};

using SentencePair = std::pair<corpus::TokenList, corpus::TokenList>;  // (source, target)

/// Lexical translation table t(target | source) plus everything needed to
/// decode with it. Source id 0 is the NULL word.
class TranslationModel {
 public:
  static constexpr WordId kNull = 0;
  static constexpr std::string_view kNullName = "<NULL>";

  TranslationModel() = default;

  bool trained() const { return trained_; }
  const AlignerConfig& config() const { return config_; }
  const Vocab& src_vocab() const { return src_vocab_; }
  const Vocab& tgt_vocab() const { return tgt_vocab_; }
  const std::vector<double>& log_likelihood_trace() const { return trace_; }

  /// Pairs dropped at ingestion because a side was empty or too long.
  std::size_t skipped_pairs() const { return skipped_; }

  /// t(tgt | src); zero for pairs that never co-occurred.
  double prob(WordId src, WordId tgt) const;
  /// Same by surface form; std::nullopt selects the NULL word.
  double prob(std::optional<std::string_view> src, std::string_view tgt) const;

  /// (tgt id, probability) entries of one source row.
  std::vector<std::pair<WordId, double>> row(WordId src) const;

  /// Mixes NULL and real positions per the configured distortion model.
  /// `j` is 1-based over m target words, `i` is 0 (NULL) or 1-based over n.
  double distortion(std::size_t i, std::size_t j, std::size_t m, std::size_t n) const;

  /// TSV `src\ttgt\tprob` with a leading `#` config header.
  std::string dump_tsv() const;

  struct Entry {
    std::optional<std::string> src;  // nullopt is the NULL word
    std::string tgt;
    double prob = 0.0;
  };

  /// A trained model holding exactly the given table. Rows are taken as
  /// given, not renormalized.
  static TranslationModel from_entries(const AlignerConfig& config, const std::vector<Entry>& entries);

  /// Inverse of dump_tsv.
  static TranslationModel load_tsv(std::string_view content);

 private:
  friend TranslationModel train(const std::vector<SentencePair>& pairs, const AlignerConfig& config);

  AlignerConfig config_;
  bool trained_ = false;
  Vocab src_vocab_;
  Vocab tgt_vocab_;
  // CSR over source ids; columns sorted within each row.
  std::vector<std::size_t> row_start_;
  std::vector<WordId> cols_;
  std::vector<double> probs_;
  std::vector<double> trace_;
  std::size_t skipped_ = 0;

  std::optional<std::size_t> slot(WordId src, WordId tgt) const;
};

/// Runs `config.iterations` rounds of EM. Throws EmptyCorpus when no usable
/// pair remains and InvalidConfig for bad settings.
TranslationModel train(const std::vector<SentencePair>& pairs, const AlignerConfig& config = {});

struct Link {
  std::size_t src = 0;
  std::size_t tgt = 0;

  bool operator==(const Link&) const = default;
  auto operator<=>(const Link&) const = default;
};

using LinkList = std::vector<Link>;
using AlignmentData = std::vector<LinkList>;

/// Best source position per target word. NULL choices, out-of-vocabulary
/// target words and zero-probability choices emit no link. Ties go to the
/// smallest source position; NULL loses every tie.
LinkList viterbi_align(const TranslationModel& model, const SentencePair& pair);

AlignmentData align_corpus(const TranslationModel& model, const std::vector<SentencePair>& pairs);

/// Pharaoh format: `i-j` links separated by spaces, one line per pair.
std::string write_pharaoh(const AlignmentData& data);
AlignmentData parse_pharaoh(std::string_view content);

}  // namespace imgpivot::align
