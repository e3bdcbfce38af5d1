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
#include <vector>

#include "imgpivot/corpus/text.hpp"

namespace imgpivot::eval {

/// Which reference length feeds the brevity penalty when a sentence has
/// several references. `shortest` is the NIST mteval convention, `closest`
/// the IBM one (ties resolved to the shorter reference).
enum class RefLength { shortest, closest };

struct BleuOptions {
  int max_n = 4;
  /// Add-one smoothing of the n >= 2 precisions.
  bool smooth = false;
  RefLength ref_length = RefLength::shortest;
};

/// Sufficient statistics of corpus BLEU.
struct BleuStats {
  std::vector<std::int64_t> matches;  // clipped n-gram matches, index n - 1
  std::vector<std::int64_t> totals;   // hypothesis n-grams, index n - 1
  std::int64_t hyp_length = 0;
  std::int64_t ref_length = 0;
};

struct BleuResult {
  double score = 0.0;  // 0..100
  std::vector<double> precisions;
  double brevity_penalty = 1.0;
  BleuStats stats;
};

using References = std::vector<std::vector<corpus::TokenList>>;

/// Throws LengthMismatch when the corpora differ in size or are empty, and
/// InvalidArgument for max_n < 1 or a sentence without references.
BleuStats bleu_stats(const std::vector<corpus::TokenList>& hypotheses, const References& references,
                     const BleuOptions& options = {});

BleuResult bleu_from_stats(const BleuStats& stats, const BleuOptions& options = {});

BleuResult bleu(const std::vector<corpus::TokenList>& hypotheses, const References& references,
                const BleuOptions& options = {});

}  // namespace imgpivot::eval
