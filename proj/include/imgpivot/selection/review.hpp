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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imgpivot/corpus/caption.hpp"

namespace imgpivot::selection {

enum class Verdict { keep, prune };

struct ReviewDecision {
  std::string image_id;
  Verdict verdict = Verdict::keep;
  std::optional<std::string> reason;
  std::optional<std::string> reviewer;
};

struct ReviewOutcome {
  std::vector<corpus::ImageRecord> kept;
  std::vector<corpus::ImageRecord> pruned;
};

/// Drops every image with a prune verdict, keeping relative order. Throws
/// UnknownImage when a decision names an image that is not in `selected`, and
/// InvalidArgument for two decisions on one image.
ReviewOutcome apply_review(std::vector<corpus::ImageRecord> selected,
                           const std::vector<ReviewDecision>& decisions);

/// `image_id\tkeep|prune\treason`; the reason column is optional.
std::vector<ReviewDecision> parse_review_tsv(std::string_view content);
std::string write_review_tsv(const std::vector<ReviewDecision>& decisions);

/// One image id per line.
std::vector<std::string> parse_id_list(std::string_view content);
std::string write_id_list(const std::vector<std::string>& ids);

}  // namespace imgpivot::selection
