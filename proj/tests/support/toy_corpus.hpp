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

// Small bilingual caption files with a known word-for-word correspondence.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "imgpivot/util/io.hpp"

namespace toy {

inline const std::vector<std::string>& hi_words() {
  static const std::vector<std::string> w = {"कुत्ता", "घास", "पर", "दौड़ता", "लड़का", "टोपी", "बच्चे", "पानी", "लाल", "गेंद"};
  return w;
}

inline const std::vector<std::string>& en_words() {
  static const std::vector<std::string> w = {"dog", "grass", "on", "runs", "boy", "hat", "children", "water", "red", "ball"};
  return w;
}

struct Files {
  std::filesystem::path src;  // hi
  std::filesystem::path tgt;  // en
};

/// `images` images with `per_image` captions in each language. Captions of
/// one image share a topic so cross pairs are comparable.
inline Files write_captions(const std::filesystem::path& dir, std::size_t images, std::size_t per_image,
                            std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::string src, tgt;
  for (std::size_t i = 0; i < images; ++i) {
    const std::size_t topic = rng() % hi_words().size();
    for (std::size_t k = 0; k < per_image; ++k) {
      std::vector<std::size_t> words = {topic};
      for (std::size_t n = 2 + rng() % 4; n > 0; --n) words.push_back(rng() % hi_words().size());
      std::string h, e;
      for (auto w : words) {
        h += (h.empty() ? "" : " ") + hi_words()[w];
        e += (e.empty() ? "" : " ") + en_words()[w];
      }
      const std::string key = "toy" + std::to_string(i) + ".jpg#" + std::to_string(k) + "\t";
      src += key + h + "\n";
      tgt += key + e + "\n";
    }
  }
  Files f{dir / "hi.txt", dir / "en.txt"};
  imgpivot::util::write_file(f.src, src);
  imgpivot::util::write_file(f.tgt, tgt);
  return f;
}

}  // namespace toy
