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

#include "imgpivot/selection/review.hpp"

#include <map>
#include <set>

#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"

namespace imgpivot::selection {

ReviewOutcome apply_review(std::vector<corpus::ImageRecord> selected,
                           const std::vector<ReviewDecision>& decisions) {
  std::set<std::string> present;
  for (const auto& img : selected) present.insert(img.id);

  std::map<std::string, Verdict> verdicts;
  for (const auto& d : decisions) {
    if (!present.count(d.image_id)) {
      throw Error(ErrorCode::UnknownImage, "decision for non-selected image " + d.image_id);
    }
    if (!verdicts.emplace(d.image_id, d.verdict).second) {
      throw Error(ErrorCode::InvalidArgument, "more than one decision for " + d.image_id);
    }
  }

  ReviewOutcome out;
  for (auto& img : selected) {
    auto it = verdicts.find(img.id);
    if (it != verdicts.end() && it->second == Verdict::prune) {
      img.transition(corpus::ImageStatus::pruned);
      out.pruned.push_back(std::move(img));
    } else {
      out.kept.push_back(std::move(img));
    }
  }
  return out;
}

std::vector<ReviewDecision> parse_review_tsv(std::string_view content) {
  std::vector<ReviewDecision> out;
  std::size_t line_no = 0;
  for (auto line : util::split_lines(content)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto cols = util::split(line, '\t');
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty()) {
      throw Error(ErrorCode::MalformedLine, "expected image_id, verdict and optional reason", line_no);
    }
    ReviewDecision d;
    d.image_id = std::string(cols[0]);
    if (cols[1] == "keep") {
      d.verdict = Verdict::keep;
    } else if (cols[1] == "prune") {
      d.verdict = Verdict::prune;
    } else {
      throw Error(ErrorCode::MalformedLine, "verdict must be keep or prune", line_no);
    }
    if (cols.size() == 3 && !cols[2].empty()) d.reason = std::string(cols[2]);
    out.push_back(std::move(d));
  }
  return out;
}

std::string write_review_tsv(const std::vector<ReviewDecision>& decisions) {
  std::string out;
  for (const auto& d : decisions) {
    out += d.image_id;
    out += d.verdict == Verdict::keep ? "\tkeep\t" : "\tprune\t";
    out += d.reason.value_or("");
    out += '\n';
  }
  return out;
}

std::vector<std::string> parse_id_list(std::string_view content) {
  std::vector<std::string> ids;
  for (auto line : util::split_lines(content)) {
    if (!line.empty()) ids.emplace_back(line);
  }
  return ids;
}

std::string write_id_list(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    out += id;
    out += '\n';
  }
  return out;
}

}  // namespace imgpivot::selection
