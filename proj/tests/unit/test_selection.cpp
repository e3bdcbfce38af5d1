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

#include <algorithm>
#include <random>

#include "../support/complexity_props.hpp"
#include "../support/oracles.hpp"
#include "imgpivot/error.hpp"
#include "imgpivot/selection/complexity.hpp"
#include "imgpivot/selection/review.hpp"

using namespace imgpivot;
using namespace imgpivot::selection;
using corpus::Caption;
using corpus::CaptionSet;

namespace {

CaptionSet make_set(const std::string& id, const std::vector<std::string>& texts) {
  CaptionSet s{id, "en", {}};
  for (std::size_t k = 0; k < texts.size(); ++k) s.captions.emplace_back(id, "en", k, texts[k]);
  return s;
}

}  // namespace

TEST_CASE("edit distance fixtures agree with the brute-force oracle") {
  CHECK(edit_distance(std::string("kitten"), std::string("sitting")) == 3);
  CHECK(oracle::brute_edit_distance(std::string("kitten"), std::string("sitting")) == 3);
  CHECK(edit_distance(std::string(""), std::string("abc")) == 3);
  CHECK(edit_distance(std::string("same"), std::string("same")) == 0);
  CHECK(char_edit_distance("पहाड़", "पहाड़ी") == 1);  // code points, not bytes
}

TEST_CASE("edit distance matches exhaustive recursion on random strings") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    auto a = oracle::random_u32(rng, 5, 8), b = oracle::random_u32(rng, 5, 8);
    CHECK(edit_distance(a, b) == oracle::brute_edit_distance(a, b));
  }
}

TEST_CASE("complexity score fixtures") {
  auto s = complexity_score(make_set("i", {"a dog runs", "a dog runs"}));
  CHECK(s.length == 6);
  CHECK(s.unique == 6);
  CHECK(s.edits == 0);
  CHECK(s.score == 12);

  // e = 9, frozen from an independent DP table over the two normalized strings.
  auto t = complexity_score(make_set("j", {"a dog runs", "a big dog runs fast"}));
  CHECK(t.length == 8);
  CHECK(t.unique == 8);
  CHECK(t.edits == 9);
  CHECK(t.score == 25);

  auto five = complexity_score(make_set("k", {"a b c", "a b c", "a b c", "a b c", "a b c"}));
  CHECK(five.length == 15);
  CHECK(five.unique == 15);
  CHECK(five.edits == 0);
  CHECK(five.score == 30);
}

TEST_CASE("unique words are counted per caption, then summed") {
  auto s = complexity_score(make_set("i", {"the dog the dog", "dog"}));
  CHECK(s.length == 5);
  CHECK(s.unique == 3);
}

TEST_CASE("token-level edit distance switch") {
  auto s = complexity_score(make_set("i", {"a dog runs", "a big dog runs fast"}), EditUnit::token);
  CHECK(s.edits == 2);
  CHECK(s.score == 18);
}

TEST_CASE("character mode compares normalized captions") {
  // Case and terminal punctuation vanish under normalization.
  auto s = complexity_score(make_set("i", {"A Dog runs.", "a dog runs"}));
  CHECK(s.edits == 0);
}

TEST_CASE("empty caption set is rejected") {
  CaptionSet empty{"x", "en", {}};
  CHECK_THROWS_AS(complexity_score(empty), Error);
}

TEST_CASE("rank_images: k-smallest by (d, id), ties by id, k edge cases") {
  corpus::CaptionCorpus c;
  c["b"] = make_set("b", {"a dog"});
  c["a"] = make_set("a", {"a cat"});
  c["z"] = make_set("z", {"x"});
  c["m"] = make_set("m", {"a very long caption indeed"});
  auto ranked = rank_images(c, 3);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].image_id == "z");
  CHECK(ranked[1].image_id == "a");  // equal d with "b", ordered by id
  CHECK(ranked[2].image_id == "b");
  CHECK(rank_images(c, 0).empty());
  CHECK(rank_images(c, 99).size() == 4);
}

TEST_CASE("parallel scoring equals serial scoring") {
  corpus::CaptionCorpus c;
  std::mt19937_64 rng(3);
  const std::vector<std::string> words = {"a", "dog", "cat", "runs", "in", "the", "park", "water"};
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> texts;
    for (int k = 0; k < 5; ++k) {
      std::string t;
      for (std::size_t w = 1 + rng() % 6; w > 0; --w) t += words[rng() % words.size()] + " ";
      texts.push_back(t);
    }
    auto id = "img" + std::to_string(i);
    c[id] = make_set(id, texts);
  }
  CHECK(score_corpus(c, {EditUnit::character, 1}) == score_corpus(c, {EditUnit::character, 4}));
}

TEST_CASE("scores TSV round trip and validation") {
  std::vector<ComplexityScore> scores = {{"a", 1, 1, 0, 2}, {"b", 3, 2, 4, 9}};
  auto tsv = write_scores_tsv(scores);
  CHECK(tsv == "a\t1\t1\t0\t2\nb\t3\t2\t4\t9\n");
  CHECK(parse_scores_tsv(tsv) == scores);
  CHECK_THROWS_AS(parse_scores_tsv("a\t1\t1\t0\t3\n"), Error);
  CHECK_THROWS_AS(parse_scores_tsv("a\t1\t1\n"), Error);
}

TEST_CASE("apply_review") {
  std::vector<corpus::ImageRecord> selected;
  for (const char* id : {"a", "b", "c", "d"}) selected.push_back({id, std::nullopt, corpus::ImageStatus::selected});

  SUBCASE("no decisions leaves input unchanged") {
    auto out = apply_review(selected, {});
    REQUIRE(out.kept.size() == 4);
    CHECK(out.kept[3].id == "d");
    CHECK(out.pruned.empty());
  }
  SUBCASE("prunes keep relative order and update status") {
    auto out = apply_review(selected, {{"b", Verdict::prune, "culture-specific", std::nullopt},
                                       {"c", Verdict::keep, std::nullopt, std::nullopt}});
    REQUIRE(out.kept.size() == 3);
    CHECK(out.kept[0].id == "a");
    CHECK(out.kept[1].id == "c");
    CHECK(out.kept[2].id == "d");
    REQUIRE(out.pruned.size() == 1);
    CHECK(out.pruned[0].status == corpus::ImageStatus::pruned);
  }
  SUBCASE("unknown image") {
    try {
      apply_review(selected, {{"nope", Verdict::prune, std::nullopt, std::nullopt}});
      FAIL("expected UnknownImage");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownImage);
    }
  }
  SUBCASE("two decisions for one image") {
    CHECK_THROWS_AS(apply_review(selected, {{"a", Verdict::prune, {}, {}}, {"a", Verdict::keep, {}, {}}}), Error);
  }
}

TEST_CASE("review TSV parsing") {
  auto d = parse_review_tsv("a\tprune\tcelebrity\nb\tkeep\n");
  REQUIRE(d.size() == 2);
  CHECK(d[0].verdict == Verdict::prune);
  CHECK(d[0].reason == "celebrity");
  CHECK(d[1].verdict == Verdict::keep);
  CHECK_FALSE(d[1].reason.has_value());
  CHECK_THROWS_AS(parse_review_tsv("a\tmaybe\n"), Error);
  CHECK(parse_review_tsv(write_review_tsv(d)).size() == 2);
}

TEST_CASE("complexity score properties on random caption sets") {
  std::vector<std::string> errors;
  CHECK(props::complexity_trials(21, 3000, errors) == 0);
  for (const auto& e : errors) MESSAGE(e);
}
