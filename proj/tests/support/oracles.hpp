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

// Reference implementations used only by tests. Each one takes a different
// route from the library code it checks: plain recursion instead of DP,
// string-keyed maps instead of CSR tables, quadrature instead of continued
// fractions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// Levenshtein distance by exhaustive recursion over edit scripts. Exponential;
/// keep inputs short (<= 8 symbols).
template <typename Seq>
std::size_t brute_edit_distance(const Seq& a, const Seq& b, std::size_t i = 0, std::size_t j = 0) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best = 1 + brute_edit_distance(a, b, i + 1, j);                 // delete
  best = std::min(best, 1 + brute_edit_distance(a, b, i, j + 1));             // insert
  best = std::min(best, (a[i] == b[j] ? 0 : 1) + brute_edit_distance(a, b, i + 1, j + 1));
  return best;
}

using Tokens = std::vector<std::string>;
using Pair = std::pair<Tokens, Tokens>;
using TTable = std::map<std::pair<std::string, std::string>, double>;  // (src, tgt) -> t(tgt|src)

inline const std::string kNull = "\x01NULL";

/// Distortion: (i, j, m, n) -> weight, i = 0 is NULL, i and j 1-based.
using Distortion = std::function<double(std::size_t, std::size_t, std::size_t, std::size_t)>;

inline Distortion uniform_distortion() {
  return [](std::size_t, std::size_t, std::size_t, std::size_t n) { return 1.0 / static_cast<double>(n + 1); };
}

inline Distortion diagonal_distortion(double tension, double p0) {
  return [=](std::size_t i, std::size_t j, std::size_t m, std::size_t n) {
    if (i == 0) return p0;
    double z = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      z += std::exp(-tension * std::abs(double(j) / double(m) - double(k) / double(n)));
    }
    return (1.0 - p0) * std::exp(-tension * std::abs(double(j) / double(m) - double(i) / double(n))) / z;
  };
}

struct EmRun {
  TTable t;
  std::vector<double> log_likelihood;
};

/// Textbook EM with string-keyed maps, no flooring.
inline EmRun reference_em(const std::vector<Pair>& corpus, int iterations, const Distortion& delta) {
  EmRun run;
  std::map<std::string, std::set<std::string>> cooc;
  for (const auto& [src, tgt] : corpus) {
    for (const auto& f : tgt) {
      cooc[kNull].insert(f);
      for (const auto& e : src) cooc[e].insert(f);
    }
  }
  for (const auto& [e, fs] : cooc) {
    for (const auto& f : fs) run.t[{e, f}] = 1.0 / double(fs.size());
  }
  for (int it = 0; it < iterations; ++it) {
    TTable count;
    std::map<std::string, double> total;
    double ll = 0.0;
    for (const auto& [src, tgt] : corpus) {
      const std::size_t n = src.size(), m = tgt.size();
      for (std::size_t j = 1; j <= m; ++j) {
        const auto& f = tgt[j - 1];
        std::vector<double> w(n + 1);
        double z = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
          const auto& e = i == 0 ? kNull : src[i - 1];
          w[i] = delta(i, j, m, n) * run.t[{e, f}];
          z += w[i];
        }
        ll += std::log(z);
        for (std::size_t i = 0; i <= n; ++i) {
          const auto& e = i == 0 ? kNull : src[i - 1];
          count[{e, f}] += w[i] / z;
          total[e] += w[i] / z;
        }
      }
    }
    for (auto& [key, value] : run.t) value = count[key] / total[key.first];
    run.log_likelihood.push_back(ll);
  }
  return run;
}

/// Viterbi by enumerating every joint assignment of target words to
/// {NULL, 1..n}. Among maximal assignments the preferred one maps each word to
/// the smallest real position, NULL last. Zero-score choices count as NULL.
inline std::vector<std::pair<std::size_t, std::size_t>> brute_viterbi(
    const Tokens& src, const Tokens& tgt, const std::function<double(const std::string&, const std::string&)>& t,
    const Distortion& delta) {
  const std::size_t n = src.size(), m = tgt.size();
  // choice value c in 0..n maps to source position c + 1 for c < n and NULL for c == n.
  std::vector<std::size_t> choice(m, 0), best_choice;
  double best = -1.0;
  for (;;) {
    double score = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = choice[j] == n ? 0 : choice[j] + 1;
      score *= delta(i, j + 1, m, n) * t(i == 0 ? kNull : src[i - 1], tgt[j]);
    }
    if (score > best) {
      best = score;
      best_choice = choice;
    }
    std::size_t k = 0;
    while (k < m && ++choice[k] > n) choice[k++] = 0;
    if (k == m) break;
  }
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t c = best_choice[j];
    if (c == n) continue;
    if (delta(c + 1, j + 1, m, n) * t(src[c], tgt[j]) <= 0.0) continue;
    links.emplace_back(c, j);
  }
  return links;
}

/// Student t density.
inline double t_density(double x, double df) {
  const double log_c = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * M_PI);
  return std::exp(log_c - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

/// Two-sided p-value by composite Simpson integration of the density over
/// [0, |t|].
inline double t_two_sided_by_quadrature(double t, double df, int intervals = 200000) {
  const double b = std::abs(t);
  const double h = b / intervals;
  double s = t_density(0.0, df) + t_density(b, df);
  for (int k = 1; k < intervals; ++k) s += (k % 2 ? 4.0 : 2.0) * t_density(k * h, df);
  return 1.0 - 2.0 * (s * h / 3.0);
}

/// Random lowercase ASCII / Devanagari-mix strings of length <= max_len.
inline std::u32string random_u32(std::mt19937_64& rng, std::size_t max_len, std::size_t alphabet = 4) {
  static const char32_t kAlphabet[] = {U'a', U'b', U'क', U'ख', U'c', U'ग', U' ', U'd'};
  std::uniform_int_distribution<std::size_t> len(0, max_len), sym(0, std::min<std::size_t>(alphabet, 8) - 1);
  std::u32string s(len(rng), U'a');
  for (auto& c : s) c = kAlphabet[sym(rng)];
  return s;
}

}  // namespace oracle
