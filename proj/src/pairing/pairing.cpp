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

#include "imgpivot/pairing/pairing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"
#include "imgpivot/util/rng.hpp"

namespace imgpivot::pairing {

std::string_view to_string(PairingMethod method) {
  return method == PairingMethod::cross ? "cross" : "random";
}

PairingMethod parse_method(std::string_view text) {
  if (text == "cross") return PairingMethod::cross;
  if (text == "random") return PairingMethod::random;
  throw Error(ErrorCode::InvalidArgument, "unknown pairing method '" + std::string(text) + "'");
}

namespace {

void check_sides(const corpus::CaptionSet& src, const corpus::CaptionSet& tgt) {
  if (src.image_id != tgt.image_id) {
    throw Error(ErrorCode::ImageMismatch, src.image_id + " vs " + tgt.image_id);
  }
  if (src.empty() || tgt.empty()) {
    throw Error(ErrorCode::EmptySide, "image " + src.image_id + " has no captions on one side");
  }
}

ComparablePair make_pair(const corpus::Caption& s, const corpus::Caption& t, PairingMethod method) {
  return ComparablePair{s.image_id(), s.index(), t.index(), s.raw_text(), t.raw_text(), method};
}

}  // namespace

std::vector<ComparablePair> pair_cross(const corpus::CaptionSet& src, const corpus::CaptionSet& tgt) {
  check_sides(src, tgt);
  std::vector<ComparablePair> out;
  out.reserve(src.size() * tgt.size());
  for (const auto& t : tgt.captions) {
    for (const auto& s : src.captions) out.push_back(make_pair(s, t, PairingMethod::cross));
  }
  return out;
}

std::vector<ComparablePair> pair_random(const corpus::CaptionSet& src, const corpus::CaptionSet& tgt,
                                        std::uint64_t seed) {
  check_sides(src, tgt);
  util::Rng rng(seed);
  const bool src_smaller = src.size() <= tgt.size();
  const std::size_t small = std::min(src.size(), tgt.size());
  std::vector<std::size_t> large(std::max(src.size(), tgt.size()));
  std::iota(large.begin(), large.end(), std::size_t{0});
  rng.shuffle(large);

  std::vector<ComparablePair> out;
  out.reserve(small);
  for (std::size_t i = 0; i < small; ++i) {
    const auto& s = src_smaller ? src.captions[i] : src.captions[large[i]];
    const auto& t = src_smaller ? tgt.captions[large[i]] : tgt.captions[i];
    out.push_back(make_pair(s, t, PairingMethod::random));
  }
  return out;
}

ComparableCorpus build_corpus(const corpus::CaptionCorpus& src, const corpus::CaptionCorpus& tgt,
                              const std::vector<std::string>& image_ids, PairingMethod method,
                              std::uint64_t seed) {
  ComparableCorpus out;
  out.method = method;
  if (method == PairingMethod::random) out.seed = seed;
  for (const auto& id : image_ids) {
    auto s = src.find(id);
    auto t = tgt.find(id);
    if (s == src.end() || t == tgt.end()) {
      throw Error(ErrorCode::EmptySide, "image " + id + " lacks " +
                                            (s == src.end() ? "source" : "target") + " captions");
    }
    if (out.src_language.empty()) {
      out.src_language = s->second.language;
      out.tgt_language = t->second.language;
      if (out.src_language == out.tgt_language) {
        throw Error(ErrorCode::InvalidArgument, "source and target language are both " +
                                                    out.src_language);
      }
    }
    auto pairs = method == PairingMethod::cross
                     ? pair_cross(s->second, t->second)
                     : pair_random(s->second, t->second, util::derive_seed(seed, id));
    out.pairs.insert(out.pairs.end(), std::make_move_iterator(pairs.begin()),
                     std::make_move_iterator(pairs.end()));
  }
  return out;
}

std::vector<std::string> image_order(const ComparableCorpus& corpus) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& p : corpus.pairs) {
    if (seen.insert(p.image_id).second) order.push_back(p.image_id);
  }
  return order;
}

std::pair<ComparableCorpus, ComparableCorpus> split_corpus(const ComparableCorpus& corpus,
                                                           double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "test fraction must lie in (0, 1)");
  }
  auto images = image_order(corpus);
  const std::size_t n = images.size();
  if (n < 2) {
    throw Error(ErrorCode::DegenerateSplit, "need at least two images, have " + std::to_string(n));
  }
  auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n) + 0.5));
  n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

  util::Rng rng(seed);
  rng.shuffle(images);
  std::set<std::string> test_images(images.begin(), images.begin() + static_cast<std::ptrdiff_t>(n_test));

  ComparableCorpus train = corpus;
  ComparableCorpus test = corpus;
  train.pairs.clear();
  test.pairs.clear();
  for (const auto& p : corpus.pairs) {
    (test_images.count(p.image_id) ? test : train).pairs.push_back(p);
  }
  return {std::move(train), std::move(test)};
}

CorpusFiles serialize_corpus(const ComparableCorpus& corpus) {
  CorpusFiles files;
  files.meta = "image_id\tsrc_index\ttgt_index\tmethod\n";
  for (const auto& p : corpus.pairs) {
    files.src += p.src_text;
    files.src += '\n';
    files.tgt += p.tgt_text;
    files.tgt += '\n';
    files.meta += p.image_id + '\t' + std::to_string(p.src_index) + '\t' +
                  std::to_string(p.tgt_index) + '\t' + std::string(to_string(p.method)) + '\n';
  }
  return files;
}

namespace {

std::size_t parse_index(std::string_view s, std::size_t line_no) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedLine, "bad index '" + std::string(s) + "'", line_no);
  }
  return v;
}

}  // namespace

ComparableCorpus parse_corpus(const CorpusFiles& files, std::string src_language,
                              std::string tgt_language) {
  auto src = util::split_lines(files.src);
  auto tgt = util::split_lines(files.tgt);
  auto meta = util::split_lines(files.meta);
  if (!meta.empty() && meta.front().rfind("image_id\t", 0) == 0) meta.erase(meta.begin());
  if (src.size() != tgt.size() || src.size() != meta.size()) {
    throw Error(ErrorCode::LengthMismatch, "corpus files are not line-aligned (" +
                                               std::to_string(src.size()) + "/" +
                                               std::to_string(tgt.size()) + "/" +
                                               std::to_string(meta.size()) + ")");
  }
  ComparableCorpus out;
  out.src_language = std::move(src_language);
  out.tgt_language = std::move(tgt_language);
  for (std::size_t i = 0; i < meta.size(); ++i) {
    auto cols = util::split(meta[i], '\t');
    if (cols.size() != 4) throw Error(ErrorCode::MalformedLine, "meta needs 4 columns", i + 2);
    ComparablePair p;
    p.image_id = std::string(cols[0]);
    p.src_index = parse_index(cols[1], i + 2);
    p.tgt_index = parse_index(cols[2], i + 2);
    p.method = parse_method(cols[3]);
    p.src_text = std::string(src[i]);
    p.tgt_text = std::string(tgt[i]);
    if (i == 0) out.method = p.method;
    out.pairs.push_back(std::move(p));
  }
  return out;
}

std::vector<std::filesystem::path> corpus_paths(const std::filesystem::path& prefix) {
  auto with = [&](const char* suffix) {
    auto p = prefix;
    p += suffix;
    return p;
  };
  return {with(".src"), with(".tgt"), with(".meta.tsv")};
}

void write_corpus(const ComparableCorpus& corpus, const std::filesystem::path& prefix) {
  auto files = serialize_corpus(corpus);
  auto paths = corpus_paths(prefix);
  util::write_file(paths[0], files.src);
  util::write_file(paths[1], files.tgt);
  util::write_file(paths[2], files.meta);
}

ComparableCorpus read_corpus(const std::filesystem::path& prefix, std::string src_language,
                             std::string tgt_language) {
  auto paths = corpus_paths(prefix);
  CorpusFiles files{util::read_file(paths[0]), util::read_file(paths[1]), util::read_file(paths[2])};
  return parse_corpus(files, std::move(src_language), std::move(tgt_language));
}

}  // namespace imgpivot::pairing
