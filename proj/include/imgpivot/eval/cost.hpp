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
#include <string>

#include <json.hpp>

namespace imgpivot::eval {

struct CostInputs {
  std::int64_t n_captions = 2500;
  double total_cost = 197.0;              // USD
  double avg_minutes_per_caption = 4.04;
  std::int64_t total_words = 114433;
  double pro_per_word_rate = 0.10;        // USD per word
  double pro_hourly_rate = 31.56;         // USD per hour
};

/// Totals printed alongside the collection figures above when they were first
/// published. The per-word and hourly totals do not follow from the inputs
/// (114,433 x 0.10 = 11,443.30; 168.33 h x 31.56 = 5,312.67), so reports
/// show them next to the derived values instead of replacing them.
struct PublishedCostFigures {
  double total_hours = 168.0;
  double pro_hourly_total = 5539.0;
  double pro_per_word_total = 12107.0;
  double savings_ratio = 28.0;
};

struct CostReport {
  CostInputs inputs;
  double cost_per_caption = 0.0;
  double total_hours = 0.0;
  double pro_hourly_total = 0.0;
  double pro_per_word_total = 0.0;
  /// Cheaper professional estimate over the crowd cost.
  double savings_ratio = 0.0;
  PublishedCostFigures published;

  std::string table() const;
  nlohmann::json to_json() const;
};

/// Throws InvalidArgument unless every input is strictly positive.
CostReport cost_report(const CostInputs& inputs);

/// Rounds a currency amount to whole cents.
double to_cents(double amount);

}  // namespace imgpivot::eval
