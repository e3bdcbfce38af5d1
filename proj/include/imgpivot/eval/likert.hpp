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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace imgpivot::eval {

/// Identifies a rated sentence pair by image and caption indices.
struct PairRef {
  std::string image_id;
  std::size_t src_index = 0;
  std::size_t tgt_index = 0;

  bool operator==(const PairRef&) const = default;
  auto operator<=>(const PairRef&) const = default;
};

struct LikertRating {
  PairRef pair;
  int rating = 0;  // 1..5
  std::optional<std::string> rater_id;

  bool operator==(const LikertRating&) const = default;
};

struct LikertCategory {
  int value;
  std::string_view label;
  std::string_view criteria;
};

/// The five rating categories from 5 (Perfect) down to 1 (Not a translation).
const std::array<LikertCategory, 5>& likert_categories();

/// Category for a rating value; throws InvalidArgument outside 1..5.
const LikertCategory& likert_category(int rating);

struct LikertRow {
  LikertCategory category;
  std::size_t count = 0;
  double percent = 0.0;     // rounded to 2 decimals
  double cumulative = 0.0;  // rounded to 2 decimals, from Perfect downward
};

struct LikertSummary {
  std::vector<LikertRow> rows;  // 5 down to 1
  std::size_t total = 0;

  std::string table() const;
  nlohmann::json to_json() const;
};

/// Throws EmptyRatings for no input and InvalidArgument for a rating outside
/// 1..5.
LikertSummary likert_summary(const std::vector<LikertRating>& ratings);

/// `image_id\tsrc_index\ttgt_index\trating\trater_id`; `#` lines skipped.
std::vector<LikertRating> parse_likert_tsv(std::string_view content);
std::string write_likert_tsv(const std::vector<LikertRating>& ratings);

}  // namespace imgpivot::eval
