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

#include "imgpivot/eval/cost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "imgpivot/error.hpp"

namespace imgpivot::eval {

double to_cents(double amount) { return std::round(amount * 100.0) / 100.0; }

CostReport cost_report(const CostInputs& in) {
  if (in.n_captions <= 0 || !(in.total_cost > 0) || !(in.avg_minutes_per_caption > 0) ||
      in.total_words <= 0 || !(in.pro_per_word_rate > 0) || !(in.pro_hourly_rate > 0)) {
    throw Error(ErrorCode::InvalidArgument, "cost inputs must all be strictly positive");
  }
  CostReport r;
  r.inputs = in;
  r.cost_per_caption = in.total_cost / static_cast<double>(in.n_captions);
  r.total_hours = static_cast<double>(in.n_captions) * in.avg_minutes_per_caption / 60.0;
  r.pro_hourly_total = r.total_hours * in.pro_hourly_rate;
  r.pro_per_word_total = static_cast<double>(in.total_words) * in.pro_per_word_rate;
  r.savings_ratio = std::min(r.pro_hourly_total, r.pro_per_word_total) / in.total_cost;
  return r;
}

std::string CostReport::table() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "                               derived      published\n"
                "cost per caption (USD)     %12.4f\n"
                "total annotation hours     %12.2f   %12.0f\n"
                "professional, hourly (USD) %12.2f   %12.0f\n"
                "professional, per word     %12.2f   %12.0f\n"
                "savings ratio (x cheaper)  %12.2f   %12.0f\n",
                cost_per_caption, total_hours, published.total_hours, to_cents(pro_hourly_total),
                published.pro_hourly_total, to_cents(pro_per_word_total), published.pro_per_word_total,
                savings_ratio, published.savings_ratio);
  return buf;
}

nlohmann::json CostReport::to_json() const {
  return {
      {"inputs",
       {{"n_captions", inputs.n_captions},
        {"total_cost", inputs.total_cost},
        {"avg_minutes_per_caption", inputs.avg_minutes_per_caption},
        {"total_words", inputs.total_words},
        {"pro_per_word_rate", inputs.pro_per_word_rate},
        {"pro_hourly_rate", inputs.pro_hourly_rate}}},
      {"derived",
       {{"cost_per_caption", cost_per_caption},
        {"total_hours", total_hours},
        {"pro_hourly_total", to_cents(pro_hourly_total)},
        {"pro_per_word_total", to_cents(pro_per_word_total)},
        {"savings_ratio", savings_ratio}}},
      {"published",
       {{"total_hours", published.total_hours},
        {"pro_hourly_total", published.pro_hourly_total},
        {"pro_per_word_total", published.pro_per_word_total},
        {"savings_ratio", published.savings_ratio}}},
  };
}

}  // namespace imgpivot::eval
