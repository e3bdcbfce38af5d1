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

#include "imgpivot/corpus/caption.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <utility>

#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"

namespace imgpivot::corpus {

std::string_view to_string(ImageStatus status) {
  switch (status) {
    case ImageStatus::candidate: return "candidate";
    case ImageStatus::selected: return "selected";
    case ImageStatus::pruned: return "pruned";
  }
  return "?";
}

void ImageRecord::transition(ImageStatus next) {
  const bool ok = (status == ImageStatus::candidate &&
                   (next == ImageStatus::selected || next == ImageStatus::pruned)) ||
                  (status == ImageStatus::selected && next == ImageStatus::pruned);
  if (!ok) {
    throw Error(ErrorCode::InvalidArgument, "illegal status change for " + id + ": " +
                                                std::string(to_string(status)) + " -> " +
                                                std::string(to_string(next)));
  }
  status = next;
}

Caption::Caption(std::string image_id, std::string language, std::size_t index,
                 std::string raw_text, std::optional<std::string> annotator_id)
    : image_id_(std::move(image_id)),
      language_(std::move(language)),
      index_(index),
      raw_text_(std::move(raw_text)),
      annotator_id_(std::move(annotator_id)) {
  if (image_id_.empty()) throw Error(ErrorCode::MalformedLine, "empty image id");
  if (!has_visible_text(raw_text_)) {
    throw Error(ErrorCode::MalformedLine, "blank caption for " + image_id_);
  }
  tokens_ = normalize(raw_text_, profile_for(language_));
}

std::vector<Caption> parse_caption_file(std::string_view content, std::string_view language) {
  if (!is_valid_utf8(content)) {
    // Locate the offending line for the diagnostic.
    std::size_t line_no = 0;
    for (auto line : util::split_lines(content)) {
      ++line_no;
      if (!is_valid_utf8(line)) throw Error(ErrorCode::InvalidUtf8, "invalid UTF-8", line_no);
    }
    throw Error(ErrorCode::InvalidUtf8, "invalid UTF-8");
  }

  std::vector<Caption> out;
  std::set<std::pair<std::string, std::size_t>> seen;
  std::size_t line_no = 0;
  for (auto line : util::split_lines(content)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw Error(ErrorCode::MalformedLine, "missing tab", line_no);
    auto key = line.substr(0, tab);
    auto hash = key.rfind('#');
    if (hash == std::string_view::npos) throw Error(ErrorCode::MalformedLine, "missing '#'", line_no);
    auto image_id = key.substr(0, hash);
    auto index_text = key.substr(hash + 1);
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(index_text.data(), index_text.data() + index_text.size(), index);
    if (index_text.empty() || ec != std::errc{} || ptr != index_text.data() + index_text.size()) {
      throw Error(ErrorCode::MalformedLine, "caption index is not a non-negative integer", line_no);
    }
    if (image_id.empty()) throw Error(ErrorCode::MalformedLine, "empty image id", line_no);
    if (!seen.emplace(std::string(image_id), index).second) {
      throw Error(ErrorCode::DuplicateKey,
                  std::string(image_id) + "#" + std::string(index_text), line_no);
    }
    try {
      out.emplace_back(std::string(image_id), std::string(language), index,
                       std::string(line.substr(tab + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), "bad caption text", line_no);
    }
  }
  return out;
}

std::string serialize_caption_file(const std::vector<Caption>& captions) {
  std::string out;
  for (const auto& c : captions) {
    out += c.image_id();
    out += '#';
    out += std::to_string(c.index());
    out += '\t';
    out += c.raw_text();
    out += '\n';
  }
  return out;
}

CaptionCorpus group_by_image(const std::vector<Caption>& captions) {
  CaptionCorpus corpus;
  for (const auto& c : captions) {
    auto& set = corpus[c.image_id()];
    set.image_id = c.image_id();
    set.language = c.language();
    set.captions.push_back(c);
  }
  for (auto& [id, set] : corpus) {
    std::stable_sort(set.captions.begin(), set.captions.end(),
                     [](const Caption& a, const Caption& b) { return a.index() < b.index(); });
  }
  return corpus;
}

}  // namespace imgpivot::corpus
