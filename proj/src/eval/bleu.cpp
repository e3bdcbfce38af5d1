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

#include "imgpivot/eval/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "imgpivot/error.hpp"

namespace imgpivot::eval {

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::int64_t>;

NgramCounts count_ngrams(const corpus::TokenList& tokens, std::size_t n) {
  NgramCounts out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

std::int64_t effective_ref_length(std::int64_t hyp_len, const std::vector<corpus::TokenList>& refs,
                                  RefLength policy) {
  auto best = static_cast<std::int64_t>(refs.front().size());
  for (const auto& r : refs) {
    const auto len = static_cast<std::int64_t>(r.size());
    if (policy == RefLength::shortest) {
      best = std::min(best, len);
    } else {
      const auto d = std::llabs(len - hyp_len);
      const auto d_best = std::llabs(best - hyp_len);
      if (d < d_best || (d == d_best && len < best)) best = len;
    }
  }
  return best;
}

}  // namespace

BleuStats bleu_stats(const std::vector<corpus::TokenList>& hypotheses, const References& references,
                     const BleuOptions& options) {
  if (hypotheses.empty() || hypotheses.size() != references.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(hypotheses.size()) + " hypotheses vs " +
                                               std::to_string(references.size()) + " reference sets");
  }
  if (options.max_n < 1) throw Error(ErrorCode::InvalidArgument, "max_n must be >= 1");
  const auto max_n = static_cast<std::size_t>(options.max_n);

  BleuStats s;
  s.matches.assign(max_n, 0);
  s.totals.assign(max_n, 0);
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    const auto& hyp = hypotheses[k];
    const auto& refs = references[k];
    if (refs.empty()) {
      throw Error(ErrorCode::InvalidArgument, "sentence " + std::to_string(k + 1) + " has no reference");
    }
    const auto hyp_len = static_cast<std::int64_t>(hyp.size());
    s.hyp_length += hyp_len;
    s.ref_length += effective_ref_length(hyp_len, refs, options.ref_length);
    for (std::size_t n = 1; n <= max_n; ++n) {
      auto hyp_counts = count_ngrams(hyp, n);
      NgramCounts max_ref;
      for (const auto& r : refs) {
        for (const auto& [g, c] : count_ngrams(r, n)) {
          auto& m = max_ref[g];
          m = std::max(m, c);
        }
      }
      for (const auto& [g, c] : hyp_counts) {
        s.totals[n - 1] += c;
        auto it = max_ref.find(g);
        if (it != max_ref.end()) s.matches[n - 1] += std::min(c, it->second);
      }
    }
  }
  return s;
}

BleuResult bleu_from_stats(const BleuStats& stats, const BleuOptions& options) {
  BleuResult r;
  r.stats = stats;
  const std::size_t max_n = stats.totals.size();
  double log_sum = 0.0;
  bool zero = stats.hyp_length == 0;
  for (std::size_t k = 0; k < max_n; ++k) {
    double m = static_cast<double>(stats.matches[k]);
    double t = static_cast<double>(stats.totals[k]);
    if (options.smooth && k > 0) {
      m += 1.0;
      t += 1.0;
    }
    const double p = t > 0.0 ? m / t : 0.0;
    r.precisions.push_back(p);
    if (p <= 0.0) {
      zero = true;
    } else {
      log_sum += std::log(p);
    }
  }
  if (stats.hyp_length > 0 && stats.hyp_length < stats.ref_length) {
    r.brevity_penalty = std::exp(1.0 - static_cast<double>(stats.ref_length) /
                                           static_cast<double>(stats.hyp_length));
  }
  if (stats.hyp_length == 0) r.brevity_penalty = 0.0;
  r.score = zero ? 0.0 : 100.0 * r.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  return r;
}

BleuResult bleu(const std::vector<corpus::TokenList>& hypotheses, const References& references,
                const BleuOptions& options) {
  return bleu_from_stats(bleu_stats(hypotheses, references, options), options);
}

}  // namespace imgpivot::eval
