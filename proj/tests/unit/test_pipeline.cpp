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

#include <filesystem>

#include "../support/testing.hpp"
#include "../support/toy_corpus.hpp"
#include "imgpivot/error.hpp"
#include "imgpivot/pipeline/pipeline.hpp"
#include "imgpivot/selection/review.hpp"
#include "imgpivot/util/io.hpp"
#include "imgpivot/util/rng.hpp"
#include "imgpivot/util/sha256.hpp"

using namespace imgpivot;
using namespace imgpivot::pipeline;
using testing::code_of;
namespace fs = std::filesystem;

namespace {

PipelineConfig toy_config(const toy::Files& files, const fs::path& out) {
  PipelineConfig c;
  c.src_captions = files.src;
  c.tgt_captions = files.tgt;
  c.out_dir = out;
  c.select_k = 6;
  c.method = pairing::PairingMethod::random;
  c.seed = 42;
  c.tiers = lexicon::parse_tiers("0.3:0");
  return c;
}

}  // namespace

TEST_CASE("stage seeds are independent derivations of the master seed") {
  CHECK(stage_seed(7, "pair") == util::derive_seed(7, "pair"));
  CHECK(stage_seed(7, "pair") != stage_seed(7, "split"));
  CHECK(stage_seed(7, "pair") != stage_seed(8, "pair"));
}

TEST_CASE("config json round trip and unknown keys") {
  PipelineConfig c;
  c.src_captions = "a.txt";
  c.select_k = 12;
  c.seed = 99;
  c.method = pairing::PairingMethod::cross;
  c.aligner.iterations = 3;
  c.tiers = lexicon::parse_tiers("0.4:1");
  auto back = PipelineConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(code_of([] { PipelineConfig::from_json({{"selectk", 3}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { PipelineConfig::from_json({{"aligner", {{"tension", 3}}}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { PipelineConfig::from_json({{"select_k", "many"}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { PipelineConfig::from_json(nlohmann::json::array()); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("toy pipeline runs every stage and is deterministic") {
  testing::TempDir dir("pipeline");
  auto files = toy::write_captions(dir.path(), 10, 2);
  auto a = run_end_to_end(toy_config(files, dir / "a"));
  auto b = run_end_to_end(toy_config(files, dir / "b"));

  REQUIRE(a.stages.size() == 5);
  for (std::size_t s = 0; s < 5; ++s) CHECK(a.stages[s].stage == kStages[s]);
  CHECK(util::read_file(dir / "a" / "manifest.json") == util::read_file(dir / "b" / "manifest.json"));
  for (const auto& stage : a.stages) {
    for (const auto& f : stage.artifacts) {
      const auto content = util::read_file(dir / "a" / f.path);
      CHECK(util::sha256_hex(content) == f.sha256);
      CHECK(content.size() == f.bytes);
      CHECK_FALSE(fs::exists(dir / "a" / (f.path + ".partial")));
    }
  }
  CHECK(fs::exists(dir / "a" / "pipeline.lock.json"));
  CHECK(selection::parse_id_list(util::read_file(dir / "a" / "selected.txt")).size() == 6);
  // Random pairing gives min(P, Q) = 2 pairs per image.
  auto corpus = pairing::read_corpus(dir / "a" / "corpus", "hi", "en");
  CHECK(corpus.pairs.size() == 12);
  CHECK_FALSE(util::read_file(dir / "a" / "dictionary.tsv").empty());

  auto other = toy_config(files, dir / "c");
  other.seed = 43;
  run_end_to_end(other);
  CHECK(util::read_file(dir / "c" / "scores.tsv") == util::read_file(dir / "a" / "scores.tsv"));
}

TEST_CASE("jobs does not change the outputs") {
  testing::TempDir dir("pipeline_jobs");
  auto files = toy::write_captions(dir.path(), 10, 2);
  auto one = toy_config(files, dir / "one");
  auto four = toy_config(files, dir / "four");
  four.jobs = 4;
  run_end_to_end(one);
  run_end_to_end(four);
  CHECK(util::read_file(dir / "one" / "manifest.json") == util::read_file(dir / "four" / "manifest.json"));
}

TEST_CASE("a missing source file fails the pair stage and leaves a partial manifest") {
  testing::TempDir dir("pipeline_fail");
  auto files = toy::write_captions(dir.path(), 10, 2);
  auto c = toy_config(files, dir / "out");
  c.src_captions = dir / "missing.txt";
  try {
    run_end_to_end(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(e.message().rfind("stage pair: ", 0) == 0);
  }
  CHECK_FALSE(fs::exists(dir / "out" / "manifest.json"));
  auto partial = nlohmann::json::parse(util::read_file(dir / "out" / "manifest.json.partial"));
  CHECK(partial["failed_stage"] == "pair");
  CHECK(partial["stages"].size() == 2);
  CHECK(fs::exists(dir / "out" / "selected.txt"));

  // A later successful run clears the partial manifest.
  c.src_captions = files.src;
  run_end_to_end(c);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "manifest.json.partial"));
}

TEST_CASE("invalid pipeline configs are rejected before any output") {
  testing::TempDir dir("pipeline_bad");
  auto files = toy::write_captions(dir.path(), 4, 2);
  auto c = toy_config(files, dir / "out");
  c.tgt_language = "hi";
  CHECK(code_of([&] { run_end_to_end(c); }) == ErrorCode::InvalidConfig);
  c = toy_config(files, "");
  CHECK(code_of([&] { run_end_to_end(c); }) == ErrorCode::InvalidConfig);
  c = toy_config(files, dir / "out");
  c.aligner.iterations = 0;
  CHECK(code_of([&] { run_end_to_end(c); }) == ErrorCode::InvalidConfig);
  CHECK_FALSE(fs::exists(dir / "out"));
}
