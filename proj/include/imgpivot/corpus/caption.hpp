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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imgpivot/corpus/text.hpp"

namespace imgpivot::corpus {

enum class ImageStatus { candidate, selected, pruned };

std::string_view to_string(ImageStatus status);

struct ImageRecord {
  std::string id;
  std::optional<std::string> uri;
  ImageStatus status = ImageStatus::candidate;

  /// Applies a status change; only candidate->selected, candidate->pruned and
  /// selected->pruned are legal. Throws InvalidArgument otherwise.
  void transition(ImageStatus next);
};

/// One caption of one image in one language. Tokens are derived from the raw
/// text at construction and cannot drift from it.
class Caption {
 public:
  /// Throws MalformedLine if `raw_text` is blank and InvalidUtf8 if it is not
  /// valid UTF-8.
  Caption(std::string image_id, std::string language, std::size_t index,
          std::string raw_text, std::optional<std::string> annotator_id = std::nullopt);

  const std::string& image_id() const { return image_id_; }
  const std::string& language() const { return language_; }
  std::size_t index() const { return index_; }
  const std::string& raw_text() const { return raw_text_; }
  const TokenList& tokens() const { return tokens_; }
  const std::optional<std::string>& annotator_id() const { return annotator_id_; }

  bool operator==(const Caption&) const = default;

 private:
  std::string image_id_;
  std::string language_;
  std::size_t index_;
  std::string raw_text_;
  TokenList tokens_;
  std::optional<std::string> annotator_id_;
};

struct CaptionSet {
  std::string image_id;
  std::string language;
  std::vector<Caption> captions;

  std::size_t size() const { return captions.size(); }
  bool empty() const { return captions.empty(); }
};

/// Caption sets keyed by image id; std::map keeps iteration deterministic.
using CaptionCorpus = std::map<std::string, CaptionSet>;

/// Parses the Flickr8k token format, `<image_id>#<index>\t<text>` per line.
/// Blank lines and lines starting with `#` are skipped.
std::vector<Caption> parse_caption_file(std::string_view content, std::string_view language);

/// Inverse of parse_caption_file for the given captions, in the given order.
std::string serialize_caption_file(const std::vector<Caption>& captions);

/// Groups captions per image, each set ordered by caption index.
CaptionCorpus group_by_image(const std::vector<Caption>& captions);

}  // namespace imgpivot::corpus
