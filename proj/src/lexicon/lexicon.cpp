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

#include "imgpivot/lexicon/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"

namespace imgpivot::lexicon {

double AlignmentCounts::prob(const std::string& src, const std::string& tgt) const {
  auto total = src_totals.find(src);
  if (total == src_totals.end() || total->second == 0) return 0.0;
  auto it = counts.find({src, tgt});
  if (it == counts.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total->second);
}

void AlignmentCounts::add(const std::string& src, const std::string& tgt, std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "link counts must be positive");
  counts[{src, tgt}] += n;
  src_totals[src] += n;
}

std::vector<ThresholdTier> default_tiers() { return {{0.5, 20}, {0.6, 5}, {0.9, 2}}; }

std::vector<ThresholdTier> parse_tiers(std::string_view text) {
  std::vector<ThresholdTier> tiers;
  for (auto item : util::split(text, ',')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "tier '" + std::string(item) + "' is not p:c");
    }
    std::string p_text(item.substr(0, colon));
    auto c_text = item.substr(colon + 1);
    ThresholdTier t;
    char* end = nullptr;
    t.p = std::strtod(p_text.c_str(), &end);
    auto [ptr, ec] = std::from_chars(c_text.data(), c_text.data() + c_text.size(), t.c);
    if (p_text.empty() || *end != '\0' || ec != std::errc{} || ptr != c_text.data() + c_text.size() ||
        t.p < 0.0 || t.p > 1.0 || t.c < 0) {
      throw Error(ErrorCode::InvalidArgument, "bad tier '" + std::string(item) + "'");
    }
    tiers.push_back(t);
  }
  if (tiers.empty()) throw Error(ErrorCode::InvalidArgument, "no tiers given");
  return tiers;
}

std::string format_tiers(const std::vector<ThresholdTier>& tiers) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%g:%lld", i ? "," : "", tiers[i].p,
                  static_cast<long long>(tiers[i].c));
    out += buf;
  }
  return out;
}

AlignmentCounts count_alignments(const align::AlignmentData& alignments,
                                 const std::vector<align::SentencePair>& pairs) {
  if (alignments.size() != pairs.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(alignments.size()) + " alignment lines for " +
                                               std::to_string(pairs.size()) + " pairs");
  }
  AlignmentCounts out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [src, tgt] = pairs[k];
    for (const auto& link : alignments[k]) {
      if (link.src >= src.size() || link.tgt >= tgt.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "link " + std::to_string(link.src) + "-" +
                                                    std::to_string(link.tgt) + " in pair " +
                                                    std::to_string(k + 1));
      }
      out.add(src[link.src], tgt[link.tgt]);
    }
  }
  return out;
}

std::vector<DictionaryEntry> extract_dictionary(const AlignmentCounts& counts,
                                                const std::vector<ThresholdTier>& tiers) {
  if (tiers.empty()) throw Error(ErrorCode::InvalidArgument, "no tiers given");
  std::vector<DictionaryEntry> out;
  for (const auto& [key, count] : counts.counts) {
    const double prob = counts.prob(key.first, key.second);
    DictionaryEntry e{key.first, key.second, count, prob, {}};
    for (const auto& t : tiers) {
      if (t.accepts(count, prob)) e.tiers_matched.push_back(t);
    }
    if (!e.tiers_matched.empty()) out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const DictionaryEntry& a, const DictionaryEntry& b) {
    if (a.src_word != b.src_word) return a.src_word < b.src_word;
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.tgt_word < b.tgt_word;
  });
  return out;
}

std::string write_dictionary_tsv(const std::vector<DictionaryEntry>& entries) {
  std::string out;
  char buf[64];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "\t%lld\t%.6f\t", static_cast<long long>(e.count), e.prob);
    out += e.src_word;
    out += '\t';
    out += e.tgt_word;
    out += buf;
    out += format_tiers(e.tiers_matched);
    out += '\n';
  }
  return out;
}

std::vector<DictionaryEntry> parse_dictionary_tsv(std::string_view content) {
  std::vector<DictionaryEntry> out;
  std::size_t line_no = 0;
  for (auto line : util::split_lines(content)) {
    ++line_no;
    if (line.empty()) continue;
    auto cols = util::split(line, '\t');
    if (cols.size() != 5) throw Error(ErrorCode::MalformedLine, "dictionary rows need 5 columns", line_no);
    DictionaryEntry e;
    e.src_word = std::string(cols[0]);
    e.tgt_word = std::string(cols[1]);
    auto [ptr, ec] = std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), e.count);
    if (ec != std::errc{}) throw Error(ErrorCode::MalformedLine, "bad count", line_no);
    e.prob = std::strtod(std::string(cols[3]).c_str(), nullptr);
    e.tiers_matched = parse_tiers(cols[4]);
    out.push_back(std::move(e));
  }
  return out;
}

Judgments parse_judgments_tsv(std::string_view content) {
  Judgments out;
  std::size_t line_no = 0;
  for (auto line : util::split_lines(content)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto cols = util::split(line, '\t');
    if (cols.size() != 3 || (cols[2] != "0" && cols[2] != "1")) {
      throw Error(ErrorCode::MalformedLine, "expected src, tgt, 0|1", line_no);
    }
    out[{std::string(cols[0]), std::string(cols[1])}] = cols[2] == "1";
  }
  return out;
}

std::string PrecisionReport::summary() const {
  char buf[96];
  if (precision) {
    std::snprintf(buf, sizeof buf, "%.1f%% (%zu/%zu)", *precision * 100.0, correct, judged);
  } else {
    std::snprintf(buf, sizeof buf, "undefined (%zu/%zu)", correct, judged);
  }
  return buf;
}

PrecisionReport score_dictionary(const std::vector<DictionaryEntry>& entries, const Judgments& judgments) {
  PrecisionReport r;
  r.entries = entries.size();
  for (const auto& e : entries) {
    auto it = judgments.find({e.src_word, e.tgt_word});
    if (it == judgments.end()) {
      ++r.unjudged;
      continue;
    }
    ++r.judged;
    if (it->second) ++r.correct;
  }
  if (r.judged > 0) r.precision = static_cast<double>(r.correct) / static_cast<double>(r.judged);
  return r;
}

}  // namespace imgpivot::lexicon
