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

#include "imgpivot/eval/likert.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"

namespace imgpivot::eval {

const std::array<LikertCategory, 5>& likert_categories() {
  static const std::array<LikertCategory, 5> kCategories{{
      {5, "Perfect", "The translation is flawless."},
      {4, "Good",
       "The translation is good. The differences between a perfect and a good translation are not "
       "very important to the meaning of the source sentence"},
      {3, "Acceptable", "The translation conveys the meaning adequately but can be improved"},
      {2, "Bad", "The translation conveys the meaning to some degree but is a bad translation"},
      {1, "Not a translation", "There is no relation whatsoever between the source and the target sentence"},
  }};
  return kCategories;
}

const LikertCategory& likert_category(int rating) {
  if (rating < 1 || rating > 5) {
    throw Error(ErrorCode::InvalidArgument, "rating " + std::to_string(rating) + " outside 1..5");
  }
  return likert_categories()[static_cast<std::size_t>(5 - rating)];
}

namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

LikertSummary likert_summary(const std::vector<LikertRating>& ratings) {
  if (ratings.empty()) throw Error(ErrorCode::EmptyRatings, "no ratings to summarize");
  std::array<std::size_t, 5> counts{};
  for (const auto& r : ratings) {
    likert_category(r.rating);
    ++counts[static_cast<std::size_t>(5 - r.rating)];
  }
  LikertSummary s;
  s.total = ratings.size();
  const double total = static_cast<double>(s.total);
  std::size_t running = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    running += counts[k];
    LikertRow row{likert_categories()[k], counts[k], round2(100.0 * static_cast<double>(counts[k]) / total),
                  round2(100.0 * static_cast<double>(running) / total)};
    s.rows.push_back(row);
  }
  s.rows.back().cumulative = 100.0;
  return s;
}

std::string LikertSummary::table() const {
  std::string out = "Quality            %        Cum. %   n\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-17s  %6.2f   %6.2f   %zu\n", std::string(r.category.label).c_str(),
                  r.percent, r.cumulative, r.count);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "total ratings: %zu\n", total);
  out += buf;
  return out;
}

nlohmann::json LikertSummary::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"rating", r.category.value},
                         {"label", r.category.label},
                         {"criteria", r.category.criteria},
                         {"count", r.count},
                         {"percent", r.percent},
                         {"cumulative", r.cumulative}});
  }
  return {{"total", total}, {"categories", rows_json}};
}

std::vector<LikertRating> parse_likert_tsv(std::string_view content) {
  std::vector<LikertRating> out;
  std::size_t line_no = 0;
  auto number = [&](std::string_view s, auto& v) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::MalformedLine, "bad number '" + std::string(s) + "'", line_no);
    }
  };
  for (auto line : util::split_lines(content)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto cols = util::split(line, '\t');
    if (cols.size() < 4 || cols.size() > 5) {
      throw Error(ErrorCode::MalformedLine, "expected 4 or 5 columns", line_no);
    }
    LikertRating r;
    r.pair.image_id = std::string(cols[0]);
    number(cols[1], r.pair.src_index);
    number(cols[2], r.pair.tgt_index);
    number(cols[3], r.rating);
    if (r.rating < 1 || r.rating > 5) throw Error(ErrorCode::MalformedLine, "rating outside 1..5", line_no);
    if (cols.size() == 5 && !cols[4].empty()) r.rater_id = std::string(cols[4]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string write_likert_tsv(const std::vector<LikertRating>& ratings) {
  std::string out;
  for (const auto& r : ratings) {
    out += r.pair.image_id + '\t' + std::to_string(r.pair.src_index) + '\t' +
           std::to_string(r.pair.tgt_index) + '\t' + std::to_string(r.rating) + '\t' +
           r.rater_id.value_or("") + '\n';
  }
  return out;
}

}  // namespace imgpivot::eval
