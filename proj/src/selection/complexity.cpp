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

#include "imgpivot/selection/complexity.hpp"

#include <charconv>
#include <set>
#include <thread>

#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"

namespace imgpivot::selection {

std::string_view to_string(EditUnit unit) { return unit == EditUnit::character ? "char" : "token"; }

EditUnit parse_edit_unit(std::string_view text) {
  if (text == "char" || text == "character") return EditUnit::character;
  if (text == "token") return EditUnit::token;
  throw Error(ErrorCode::InvalidArgument, "edit unit must be char or token, got '" + std::string(text) + "'");
}

std::size_t char_edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(corpus::decode_utf8(a), corpus::decode_utf8(b));
}

std::size_t caption_distance(const corpus::Caption& a, const corpus::Caption& b, EditUnit unit) {
  if (unit == EditUnit::token) return edit_distance(a.tokens(), b.tokens());
  return char_edit_distance(corpus::join_tokens(a.tokens()), corpus::join_tokens(b.tokens()));
}

ComplexityScore complexity_score(const corpus::CaptionSet& captions, EditUnit unit) {
  if (captions.empty()) {
    throw Error(ErrorCode::EmptyCaptionSet, "no captions for image " + captions.image_id);
  }
  ComplexityScore s;
  s.image_id = captions.image_id;
  const auto& cs = captions.captions;

  // Decode once per caption; the pairwise loop is the hot path.
  std::vector<std::u32string> joined;
  if (unit == EditUnit::character) {
    joined.reserve(cs.size());
    for (const auto& c : cs) joined.push_back(corpus::decode_utf8(corpus::join_tokens(c.tokens())));
  }

  for (std::size_t j = 0; j < cs.size(); ++j) {
    const auto& tokens = cs[j].tokens();
    s.length += static_cast<std::int64_t>(tokens.size());
    s.unique += static_cast<std::int64_t>(std::set<std::string>(tokens.begin(), tokens.end()).size());
    for (std::size_t k = j + 1; k < cs.size(); ++k) {
      const std::size_t d = unit == EditUnit::character
                                ? edit_distance(joined[j], joined[k])
                                : edit_distance(tokens, cs[k].tokens());
      s.edits += static_cast<std::int64_t>(d);
    }
  }
  s.score = s.length + s.unique + s.edits;
  return s;
}

std::vector<ComplexityScore> score_corpus(const corpus::CaptionCorpus& corpus,
                                          const ScoringOptions& options) {
  std::vector<const corpus::CaptionSet*> sets;
  sets.reserve(corpus.size());
  for (const auto& [id, set] : corpus) sets.push_back(&set);

  std::vector<ComplexityScore> scores(sets.size());
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(sets.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < sets.size(); ++i) scores[i] = complexity_score(*sets[i], options.edit_unit);
  } else {
    // Strided partition; each slot written by exactly one worker.
    std::vector<std::exception_ptr> failures(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < sets.size(); i += jobs) {
            scores[i] = complexity_score(*sets[i], options.edit_unit);
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  std::sort(scores.begin(), scores.end(), score_less);
  return scores;
}

std::vector<ComplexityScore> select_lowest(std::vector<ComplexityScore> scores, std::size_t k) {
  k = std::min(k, scores.size());
  std::partial_sort(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(k), scores.end(),
                    score_less);
  scores.resize(k);
  return scores;
}

std::vector<ComplexityScore> rank_images(const corpus::CaptionCorpus& corpus, std::size_t k,
                                         const ScoringOptions& options) {
  return select_lowest(score_corpus(corpus, options), k);
}

std::string write_scores_tsv(const std::vector<ComplexityScore>& scores) {
  std::string out;
  for (const auto& s : scores) {
    out += s.image_id;
    for (auto v : {s.length, s.unique, s.edits, s.score}) {
      out += '\t';
      out += std::to_string(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<ComplexityScore> parse_scores_tsv(std::string_view content) {
  std::vector<ComplexityScore> out;
  std::size_t line_no = 0;
  for (auto line : util::split_lines(content)) {
    ++line_no;
    if (line.empty()) continue;
    auto cols = util::split(line, '\t');
    if (cols.size() != 5) throw Error(ErrorCode::MalformedLine, "expected 5 columns", line_no);
    ComplexityScore s;
    s.image_id = std::string(cols[0]);
    std::int64_t* fields[] = {&s.length, &s.unique, &s.edits, &s.score};
    for (int i = 0; i < 4; ++i) {
      auto col = cols[static_cast<std::size_t>(i) + 1];
      auto [ptr, ec] = std::from_chars(col.data(), col.data() + col.size(), *fields[i]);
      if (ec != std::errc{} || ptr != col.data() + col.size()) {
        throw Error(ErrorCode::MalformedLine, "non-integer score column", line_no);
      }
    }
    if (s.score != s.length + s.unique + s.edits) {
      throw Error(ErrorCode::MalformedLine, "d != l + w + e", line_no);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace imgpivot::selection
