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

#include <doctest.h>

#include <random>
#include <set>

#include "../support/testing.hpp"
#include "imgpivot/lexicon/lexicon.hpp"

using namespace imgpivot;
using namespace imgpivot::lexicon;
using testing::code_of;

namespace {

AlignmentCounts table_with(const std::string& s, const std::string& t, std::int64_t count, std::int64_t total) {
  AlignmentCounts counts;
  counts.add(s, t, count);
  if (total > count) counts.add(s, "other", total - count);
  return counts;
}

bool contains(const std::vector<DictionaryEntry>& dict, const std::string& s, const std::string& t) {
  for (const auto& e : dict) {
    if (e.src_word == s && e.tgt_word == t) return true;
  }
  return false;
}

std::set<WordPair> brute_filter(const AlignmentCounts& counts, const std::vector<ThresholdTier>& tiers) {
  std::set<WordPair> out;
  for (const auto& [pair, n] : counts.counts) {
    const double p = double(n) / double(counts.src_totals.at(pair.first));
    for (const auto& tier : tiers) {
      if (n > tier.c && p > tier.p) out.insert(pair);
    }
  }
  return out;
}

AlignmentCounts random_counts(std::mt19937_64& rng) {
  AlignmentCounts counts;
  const std::size_t entries = 1 + rng() % 10000;
  const std::size_t src_words = 1 + rng() % 200;
  for (std::size_t k = 0; k < entries; ++k) {
    counts.add("s" + std::to_string(rng() % src_words), "t" + std::to_string(rng() % 300),
               1 + std::int64_t(rng() % (rng() % 2 ? 4 : 40)));
  }
  return counts;
}

std::vector<ThresholdTier> random_tiers(std::mt19937_64& rng) {
  std::vector<ThresholdTier> tiers(1 + rng() % 4);
  for (auto& t : tiers) {
    t.p = double(rng() % 101) / 100.0;
    t.c = std::int64_t(rng() % 30);
  }
  return tiers;
}

}  // namespace

TEST_CASE("default tiers") {
  CHECK(default_tiers() == std::vector<ThresholdTier>{{0.5, 20}, {0.6, 5}, {0.9, 2}});
  CHECK(parse_tiers("0.5:20,0.6:5,0.9:2") == default_tiers());
  CHECK(format_tiers(default_tiers()) == "0.5:20,0.6:5,0.9:2");
  CHECK(code_of([] { parse_tiers("0.5"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_tiers("1.5:3"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_tiers("0.5:-1"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("threshold fixtures use strict inequalities") {
  // 21 of 38 links: p = 0.5526
  CHECK(contains(extract_dictionary(table_with("a", "x", 21, 38), default_tiers()), "a", "x"));
  // 20 of 36 links: p = 0.5556, count not above 20, prob not above 0.6
  CHECK_FALSE(contains(extract_dictionary(table_with("a", "x", 20, 36), default_tiers()), "a", "x"));
  // 3 of 3 links: p = 1.0 > 0.9 and 3 > 2
  CHECK(contains(extract_dictionary(table_with("a", "x", 3, 3), default_tiers()), "a", "x"));
  // 2 of 2 links fails every tier.
  CHECK(extract_dictionary(table_with("a", "x", 2, 2), default_tiers()).empty());
  // Exactly 0.5 at count 100 fails the first tier.
  CHECK_FALSE(contains(extract_dictionary(table_with("a", "x", 100, 200), {{0.5, 20}}), "a", "x"));
}

TEST_CASE("matched tiers are recorded") {
  auto dict = extract_dictionary(table_with("a", "x", 30, 31), default_tiers());
  REQUIRE(dict.size() == 1);
  CHECK(dict[0].count == 30);
  CHECK(dict[0].tiers_matched == default_tiers());
  CHECK(code_of([] { extract_dictionary({}, {}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("extract_dictionary equals the brute-force filter on random tables") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    auto counts = random_counts(rng);
    auto tiers = random_tiers(rng);
    auto dict = extract_dictionary(counts, tiers);
    std::set<WordPair> got;
    for (const auto& e : dict) got.insert({e.src_word, e.tgt_word});
    REQUIRE(got.size() == dict.size());
    REQUIRE(got == brute_filter(counts, tiers));
  }
}

TEST_CASE("adding a tier never removes entries") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto counts = random_counts(rng);
    auto tiers = random_tiers(rng);
    auto before = extract_dictionary(counts, tiers);
    tiers.push_back(random_tiers(rng).front());
    auto after = extract_dictionary(counts, tiers);
    for (const auto& e : before) CHECK(contains(after, e.src_word, e.tgt_word));
  }
}

TEST_CASE("link probabilities of a source word sum to one") {
  std::mt19937_64 rng(3);
  auto counts = random_counts(rng);
  std::map<std::string, double> sums;
  for (const auto& [pair, n] : counts.counts) sums[pair.first] += counts.prob(pair.first, pair.second);
  for (const auto& [s, sum] : sums) CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(counts.prob("never", "seen") == 0.0);
}

TEST_CASE("dictionary ordering") {
  AlignmentCounts counts;
  counts.add("b", "y", 5);
  counts.add("a", "y", 3);
  counts.add("a", "x", 9);
  counts.add("a", "w", 3);
  auto dict = extract_dictionary(counts, {{0.0, 0}});
  REQUIRE(dict.size() == 4);
  CHECK(dict[0].tgt_word == "x");
  CHECK(dict[1].tgt_word == "w");
  CHECK(dict[2].tgt_word == "y");
  CHECK(dict[3].src_word == "b");
}

TEST_CASE("count_alignments tabulates links") {
  std::vector<align::SentencePair> pairs = {{{"a", "b"}, {"x", "y"}}, {{"a"}, {"x", "z"}}};
  align::AlignmentData links = {{{0, 0}, {1, 1}}, {{0, 0}, {0, 1}}};
  auto counts = count_alignments(links, pairs);
  CHECK(counts.counts.at({"a", "x"}) == 2);
  CHECK(counts.counts.at({"a", "z"}) == 1);
  CHECK(counts.counts.at({"b", "y"}) == 1);
  CHECK(counts.src_totals.at("a") == 3);
  CHECK(counts.prob("a", "x") == doctest::Approx(2.0 / 3.0));
  CHECK(code_of([&] { count_alignments({{{2, 0}}, {}}, pairs); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] { count_alignments({{{0, 2}}, {}}, pairs); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] { count_alignments({{}}, pairs); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("dictionary TSV round trip") {
  auto dict = extract_dictionary(table_with("कुत्ता", "dog", 30, 31), default_tiers());
  auto text = write_dictionary_tsv(dict);
  auto back = parse_dictionary_tsv(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].src_word == "कुत्ता");
  CHECK(back[0].count == 30);
  CHECK(back[0].prob == doctest::Approx(30.0 / 31.0).epsilon(1e-6));
  CHECK(back[0].tiers_matched == default_tiers());
  CHECK(write_dictionary_tsv(back) == text);
}

TEST_CASE("precision against judgments") {
  std::vector<DictionaryEntry> dict;
  Judgments judgments;
  for (int k = 0; k < 80; ++k) {
    dict.push_back({"s" + std::to_string(k), "t", 3, 1.0, {}});
    if (k < 75) judgments[{"s" + std::to_string(k), "t"}] = k < 43;
  }
  auto report = score_dictionary(dict, judgments);
  CHECK(report.entries == 80);
  CHECK(report.judged == 75);
  CHECK(report.correct == 43);
  CHECK(report.unjudged == 5);
  CHECK(report.summary() == "57.3% (43/75)");

  dict.resize(2);
  judgments = {{{"s0", "t"}, true}, {{"s1", "t"}, true}};
  CHECK(score_dictionary(dict, judgments).summary() == "100.0% (2/2)");
  auto none = score_dictionary(dict, {});
  CHECK_FALSE(none.precision.has_value());
  CHECK(none.summary() == "undefined (0/0)");

  auto parsed = parse_judgments_tsv("# header\na\tx\t1\nb\ty\t0\n");
  CHECK(parsed.at({"a", "x"}));
  CHECK_FALSE(parsed.at({"b", "y"}));
  CHECK(code_of([] { parse_judgments_tsv("a\tx\t2\n"); }) == ErrorCode::MalformedLine);
}
