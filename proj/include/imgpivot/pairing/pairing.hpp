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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imgpivot/corpus/caption.hpp"

namespace imgpivot::pairing {

enum class PairingMethod { cross, random };

std::string_view to_string(PairingMethod method);
PairingMethod parse_method(std::string_view text);

/// One comparable sentence pair with its provenance. Indices are the caption
/// indices from the source files.
struct ComparablePair {
  std::string image_id;
  std::size_t src_index = 0;
  std::size_t tgt_index = 0;
  std::string src_text;
  std::string tgt_text;
  PairingMethod method = PairingMethod::cross;

  bool operator==(const ComparablePair&) const = default;
};

struct ComparableCorpus {
  std::vector<ComparablePair> pairs;
  std::string src_language;
  std::string tgt_language;
  PairingMethod method = PairingMethod::cross;
  std::optional<std::uint64_t> seed;

  bool operator==(const ComparableCorpus&) const = default;
};

/// All P*Q combinations, target-major. Throws ImageMismatch or EmptySide.
std::vector<ComparablePair> pair_cross(const corpus::CaptionSet& src, const corpus::CaptionSet& tgt);

/// A uniformly random injection from the smaller side into the larger one,
/// min(P, Q) pairs ordered by the smaller side's index.
std::vector<ComparablePair> pair_random(const corpus::CaptionSet& src, const corpus::CaptionSet& tgt,
                                        std::uint64_t seed);

/// Pairs the listed images in order. Random pairing draws each image from its
/// own stream, derive_seed(seed, image_id), so the result does not depend on
/// which other images are present. Throws EmptySide when an image lacks
/// captions on either side.
ComparableCorpus build_corpus(const corpus::CaptionCorpus& src, const corpus::CaptionCorpus& tgt,
                              const std::vector<std::string>& image_ids, PairingMethod method,
                              std::uint64_t seed = 0);

/// Image-level split: every pair of an image lands on one side. The number of
/// test images is round-half-up(test_fraction * N) clamped to [1, N - 1].
/// Throws DegenerateSplit when fewer than two images exist and
/// InvalidArgument when test_fraction is outside (0, 1).
std::pair<ComparableCorpus, ComparableCorpus> split_corpus(const ComparableCorpus& corpus,
                                                           double test_fraction, std::uint64_t seed);

/// Distinct image ids in first-appearance order.
std::vector<std::string> image_order(const ComparableCorpus& corpus);

struct CorpusFiles {
  std::string src;
  std::string tgt;
  std::string meta;
};

CorpusFiles serialize_corpus(const ComparableCorpus& corpus);
ComparableCorpus parse_corpus(const CorpusFiles& files, std::string src_language,
                              std::string tgt_language);

/// `<prefix>.src`, `<prefix>.tgt` and `<prefix>.meta.tsv`.
std::vector<std::filesystem::path> corpus_paths(const std::filesystem::path& prefix);
void write_corpus(const ComparableCorpus& corpus, const std::filesystem::path& prefix);
ComparableCorpus read_corpus(const std::filesystem::path& prefix, std::string src_language,
                             std::string tgt_language);

}  // namespace imgpivot::pairing
