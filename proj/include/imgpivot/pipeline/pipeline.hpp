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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "imgpivot/align/aligner.hpp"
#include "imgpivot/corpus/caption.hpp"
#include "imgpivot/lexicon/lexicon.hpp"
#include "imgpivot/pairing/pairing.hpp"
#include "imgpivot/selection/complexity.hpp"

namespace imgpivot::pipeline {

/// Stage names double as the keys of the seed derivation, so a stage's
/// randomness is derive_seed(master, name) whatever else runs.
inline constexpr const char* kStages[] = {"score", "select", "pair", "align", "dict"};

std::uint64_t stage_seed(std::uint64_t master, std::string_view stage);

struct PipelineConfig {
  /// Captions being collected (the annotators' language).
  std::filesystem::path src_captions;
  std::string src_language = "hi";
  /// The existing dataset; its captions drive image selection.
  std::filesystem::path tgt_captions;
  std::string tgt_language = "en";
  std::filesystem::path out_dir;

  std::size_t select_k = 500;
  std::optional<std::filesystem::path> review_decisions;
  selection::EditUnit edit_unit = selection::EditUnit::character;
  pairing::PairingMethod method = pairing::PairingMethod::random;
  std::uint64_t seed = 0;
  align::AlignerConfig aligner;
  std::vector<lexicon::ThresholdTier> tiers = lexicon::default_tiers();
  unsigned jobs = 1;

  /// Every field, defaults included.
  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys throw InvalidConfig.
  static PipelineConfig from_json(const nlohmann::json& j);
};

struct Artifact {
  std::string path;  // relative to out_dir
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct StageRecord {
  std::string stage;
  std::vector<Artifact> artifacts;
};

struct Manifest {
  std::string version;
  std::vector<Artifact> inputs;
  std::vector<StageRecord> stages;

  nlohmann::json to_json() const;
};

using StageLog = std::function<void(const std::string& stage, const nlohmann::json& fields)>;

/// score -> select -> pair -> align -> dict into `config.out_dir`. Writes
/// `pipeline.lock.json` first and `manifest.json` last. A failing stage
/// leaves its outputs under a `.partial` suffix, writes
/// `manifest.json.partial`, and rethrows with the stage name in the message.
Manifest run_end_to_end(const PipelineConfig& config, const StageLog& log = {});

std::string manifest_path(const std::filesystem::path& out_dir);

/// Reads a caption file, grouped by image.
corpus::CaptionCorpus load_captions(const std::filesystem::path& path, const std::string& language);

/// Normalized token pairs of a comparable corpus, ready for the aligner.
std::vector<align::SentencePair> tokenize_corpus(const pairing::ComparableCorpus& corpus);

}  // namespace imgpivot::pipeline
