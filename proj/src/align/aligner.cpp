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

#include "imgpivot/align/aligner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"

namespace imgpivot::align {

std::string_view to_string(AlignModel model) {
  return model == AlignModel::model1 ? "model1" : "diagonal";
}

AlignModel parse_model(std::string_view text) {
  if (text == "model1") return AlignModel::model1;
  if (text == "diagonal") return AlignModel::diagonal;
  throw Error(ErrorCode::InvalidConfig, "unknown alignment model '" + std::string(text) + "'");
}

void validate(const AlignerConfig& config) {
  if (config.iterations < 1) throw Error(ErrorCode::InvalidConfig, "iterations must be >= 1");
  if (!(config.diagonal_tension > 0.0)) throw Error(ErrorCode::InvalidConfig, "diagonal tension must be > 0");
  if (!(config.null_prob >= 0.0 && config.null_prob < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "null probability must lie in [0, 1)");
  }
  if (!(config.prob_floor >= 0.0 && config.prob_floor < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "probability floor must lie in [0, 1)");
  }
}

WordId Vocab::intern(const std::string& word) {
  auto [it, inserted] = ids_.emplace(word, static_cast<WordId>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

std::optional<WordId> Vocab::find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> TranslationModel::slot(WordId src, WordId tgt) const {
  if (src + 1 >= row_start_.size()) return std::nullopt;
  auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_start_[src]);
  auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_start_[src + 1]);
  auto it = std::lower_bound(first, last, tgt);
  if (it == last || *it != tgt) return std::nullopt;
  return static_cast<std::size_t>(it - cols_.begin());
}

double TranslationModel::prob(WordId src, WordId tgt) const {
  auto s = slot(src, tgt);
  return s ? probs_[*s] : 0.0;
}

double TranslationModel::prob(std::optional<std::string_view> src, std::string_view tgt) const {
  auto t = tgt_vocab_.find(tgt);
  if (!t) return 0.0;
  WordId s = kNull;
  if (src) {
    auto found = src_vocab_.find(*src);
    if (!found || *found == kNull) return 0.0;
    s = *found;
  }
  return prob(s, *t);
}

std::vector<std::pair<WordId, double>> TranslationModel::row(WordId src) const {
  std::vector<std::pair<WordId, double>> out;
  if (src + 1 >= row_start_.size()) return out;
  for (std::size_t k = row_start_[src]; k < row_start_[src + 1]; ++k) out.emplace_back(cols_[k], probs_[k]);
  return out;
}

double TranslationModel::distortion(std::size_t i, std::size_t j, std::size_t m, std::size_t n) const {
  if (config_.model == AlignModel::model1) return 1.0 / static_cast<double>(n + 1);
  if (i == 0) return config_.null_prob;
  const double jm = static_cast<double>(j) / static_cast<double>(m);
  auto feature = [&](std::size_t k) {
    return std::exp(-config_.diagonal_tension *
                    std::abs(jm - static_cast<double>(k) / static_cast<double>(n)));
  };
  double z = 0.0;
  for (std::size_t k = 1; k <= n; ++k) z += feature(k);
  return (1.0 - config_.null_prob) * feature(i) / z;
}

std::string TranslationModel::dump_tsv() const {
  char buf[64];
  std::string out = "# model=" + std::string(to_string(config_.model)) +
                    " iterations=" + std::to_string(config_.iterations);
  std::snprintf(buf, sizeof buf, " tension=%.17g", config_.diagonal_tension);
  out += buf;
  std::snprintf(buf, sizeof buf, " null_prob=%.17g", config_.null_prob);
  out += buf;
  std::snprintf(buf, sizeof buf, " prob_floor=%.17g\n", config_.prob_floor);
  out += buf;
  for (WordId s = 0; s + 1 < row_start_.size(); ++s) {
    const std::string& src = s == kNull ? std::string(kNullName) : src_vocab_.word(s);
    for (std::size_t k = row_start_[s]; k < row_start_[s + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", probs_[k]);
      out += src;
      out += '\t';
      out += tgt_vocab_.word(cols_[k]);
      out += '\t';
      out += buf;
      out += '\n';
    }
  }
  return out;
}

TranslationModel TranslationModel::from_entries(const AlignerConfig& config,
                                                const std::vector<Entry>& entries) {
  validate(config);
  TranslationModel model;
  model.config_ = config;
  model.src_vocab_.intern(" <NULL> ");
  std::vector<std::vector<std::pair<WordId, double>>> rows(1);
  for (const auto& e : entries) {
    const WordId s = e.src ? model.src_vocab_.intern(*e.src) : kNull;
    if (s == kNull && e.src) throw Error(ErrorCode::InvalidArgument, "reserved source word");
    const WordId t = model.tgt_vocab_.intern(e.tgt);
    if (rows.size() <= s) rows.resize(s + 1);
    rows[s].emplace_back(t, e.prob);
  }
  model.row_start_.assign(rows.size() + 1, 0);
  for (std::size_t s = 0; s < rows.size(); ++s) {
    auto& r = rows[s];
    std::sort(r.begin(), r.end());
    for (std::size_t k = 1; k < r.size(); ++k) {
      if (r[k].first == r[k - 1].first) throw Error(ErrorCode::DuplicateKey, "repeated table entry");
    }
    model.row_start_[s + 1] = model.row_start_[s] + r.size();
    for (const auto& [t, p] : r) {
      model.cols_.push_back(t);
      model.probs_.push_back(p);
    }
  }
  model.trained_ = true;
  return model;
}

TranslationModel TranslationModel::load_tsv(std::string_view content) {
  AlignerConfig config;
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  for (auto line : util::split_lines(content)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (auto item : util::split(line.substr(1), ' ')) {
        auto eq = item.find('=');
        if (eq == std::string_view::npos) continue;
        auto key = item.substr(0, eq);
        std::string value(item.substr(eq + 1));
        if (key == "model") config.model = parse_model(value);
        else if (key == "iterations") config.iterations = std::stoi(value);
        else if (key == "tension") config.diagonal_tension = std::stod(value);
        else if (key == "null_prob") config.null_prob = std::stod(value);
        else if (key == "prob_floor") config.prob_floor = std::stod(value);
      }
      continue;
    }
    auto cols = util::split(line, '\t');
    if (cols.size() != 3) throw Error(ErrorCode::MalformedLine, "model rows need 3 columns", line_no);
    Entry e;
    if (cols[0] != kNullName) e.src = std::string(cols[0]);
    e.tgt = std::string(cols[1]);
    e.prob = std::stod(std::string(cols[2]));
    entries.push_back(std::move(e));
  }
  return from_entries(config, entries);
}

namespace {

struct EncodedPair {
  std::vector<WordId> src;
  std::vector<WordId> tgt;
  // slots[j * (n + 1) + i]: CSR index of t(tgt[j] | src_i), i = 0 is NULL.
  std::vector<std::uint32_t> slots;
};

struct ChunkResult {
  std::vector<std::pair<std::uint32_t, double>> counts;
  double log_likelihood = 0.0;
};

constexpr std::size_t kChunkSize = 256;

// Per-target-word distortion weights for one sentence shape, i = 0..n.
std::vector<double> distortion_row(const TranslationModel& model, std::size_t j, std::size_t m,
                                   std::size_t n) {
  std::vector<double> d(n + 1);
  for (std::size_t i = 0; i <= n; ++i) d[i] = model.distortion(i, j, m, n);
  return d;
}

ChunkResult expect_chunk(const TranslationModel& model, const std::vector<EncodedPair>& corpus,
                         const std::vector<double>& probs, std::size_t begin, std::size_t end) {
  ChunkResult out;
  std::vector<double> weights;
  for (std::size_t p = begin; p < end; ++p) {
    const auto& pair = corpus[p];
    const std::size_t n = pair.src.size();
    const std::size_t m = pair.tgt.size();
    weights.resize(n + 1);
    for (std::size_t j = 0; j < m; ++j) {
      const auto delta = distortion_row(model, j + 1, m, n);
      double z = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        weights[i] = delta[i] * probs[pair.slots[j * (n + 1) + i]];
        z += weights[i];
      }
      out.log_likelihood += std::log(z);
      for (std::size_t i = 0; i <= n; ++i) {
        out.counts.emplace_back(pair.slots[j * (n + 1) + i], weights[i] / z);
      }
    }
  }
  return out;
}

// Pins entries below the floor to the floor and rescales the rest so the row
// sums to one; rescaling can push further entries under, so repeat.
void floor_row(double* p, std::size_t size, double floor) {
  if (floor <= 0.0 || static_cast<double>(size) * floor >= 1.0) return;
  std::vector<bool> pinned(size, false);
  for (;;) {
    bool changed = false;
    for (std::size_t k = 0; k < size; ++k) {
      if (!pinned[k] && p[k] < floor) {
        pinned[k] = true;
        changed = true;
      }
    }
    if (!changed) return;
    double pinned_mass = 0.0;
    double free_mass = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      if (pinned[k]) {
        p[k] = floor;
        pinned_mass += floor;
      } else {
        free_mass += p[k];
      }
    }
    if (free_mass <= 0.0) return;
    const double scale = (1.0 - pinned_mass) / free_mass;
    for (std::size_t k = 0; k < size; ++k) {
      if (!pinned[k]) p[k] *= scale;
    }
  }
}

}  // namespace

TranslationModel train(const std::vector<SentencePair>& pairs, const AlignerConfig& config) {
  validate(config);
  TranslationModel model;
  model.config_ = config;
  // Tokens never contain spaces, so this key cannot collide with corpus text.
  model.src_vocab_.intern(" <NULL> ");

  std::vector<EncodedPair> corpus;
  corpus.reserve(pairs.size());
  for (const auto& [src, tgt] : pairs) {
    if (src.empty() || tgt.empty() || src.size() > kMaxSentenceLength ||
        tgt.size() > kMaxSentenceLength) {
      ++model.skipped_;
      continue;
    }
    EncodedPair e;
    for (const auto& w : src) e.src.push_back(model.src_vocab_.intern(w));
    for (const auto& w : tgt) e.tgt.push_back(model.tgt_vocab_.intern(w));
    corpus.push_back(std::move(e));
  }
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no usable sentence pairs");

  // Co-occurrence rows: NULL co-occurs with every target word.
  std::vector<std::vector<WordId>> rows(model.src_vocab_.size());
  for (const auto& e : corpus) {
    for (WordId t : e.tgt) {
      rows[TranslationModel::kNull].push_back(t);
      for (WordId s : e.src) rows[s].push_back(t);
    }
  }
  model.row_start_.assign(rows.size() + 1, 0);
  for (std::size_t s = 0; s < rows.size(); ++s) {
    auto& r = rows[s];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    model.row_start_[s + 1] = model.row_start_[s] + r.size();
  }
  model.cols_.reserve(model.row_start_.back());
  model.probs_.reserve(model.row_start_.back());
  for (const auto& r : rows) {
    model.cols_.insert(model.cols_.end(), r.begin(), r.end());
    model.probs_.insert(model.probs_.end(), r.size(), 1.0 / static_cast<double>(r.size()));
  }
  rows.clear();

  for (auto& e : corpus) {
    const std::size_t n = e.src.size();
    e.slots.resize(e.tgt.size() * (n + 1));
    for (std::size_t j = 0; j < e.tgt.size(); ++j) {
      e.slots[j * (n + 1)] = static_cast<std::uint32_t>(*model.slot(TranslationModel::kNull, e.tgt[j]));
      for (std::size_t i = 0; i < n; ++i) {
        e.slots[j * (n + 1) + i + 1] = static_cast<std::uint32_t>(*model.slot(e.src[i], e.tgt[j]));
      }
    }
  }

  const std::size_t n_chunks = (corpus.size() + kChunkSize - 1) / kChunkSize;
  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(n_chunks)));
  std::vector<ChunkResult> chunks(n_chunks);
  std::vector<double> counts(model.probs_.size());

  for (int iter = 0; iter < config.iterations; ++iter) {
    // E-step. Chunk boundaries are fixed, so the merge below adds counts in
    // corpus order whatever the thread count.
    auto run_chunk = [&](std::size_t c) {
      chunks[c] = expect_chunk(model, corpus, model.probs_, c * kChunkSize,
                               std::min(corpus.size(), (c + 1) * kChunkSize));
    };
    if (jobs == 1) {
      for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> failures(jobs);
      std::vector<std::thread> workers;
      for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
          try {
            for (std::size_t c = next++; c < n_chunks; c = next++) run_chunk(c);
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
      }
      for (auto& t : workers) t.join();
      for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
      }
    }

    std::fill(counts.begin(), counts.end(), 0.0);
    double ll = 0.0;
    for (auto& chunk : chunks) {
      for (const auto& [slot, c] : chunk.counts) counts[slot] += c;
      ll += chunk.log_likelihood;
      chunk.counts.clear();
    }
    model.trace_.push_back(ll);

    // M-step.
    for (std::size_t s = 0; s + 1 < model.row_start_.size(); ++s) {
      const std::size_t b = model.row_start_[s];
      const std::size_t e = model.row_start_[s + 1];
      double total = 0.0;
      for (std::size_t k = b; k < e; ++k) total += counts[k];
      if (total <= 0.0) continue;
      for (std::size_t k = b; k < e; ++k) model.probs_[k] = counts[k] / total;
      floor_row(model.probs_.data() + b, e - b, config.prob_floor);
    }
  }

  model.trained_ = true;
  return model;
}

LinkList viterbi_align(const TranslationModel& model, const SentencePair& pair) {
  if (!model.trained()) throw Error(ErrorCode::UntrainedModel, "viterbi_align needs a trained model");
  const auto& [src, tgt] = pair;
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();

  std::vector<std::optional<WordId>> src_ids;
  src_ids.reserve(n);
  for (const auto& w : src) {
    auto id = model.src_vocab().find(w);
    src_ids.push_back(id && *id != TranslationModel::kNull ? id : std::nullopt);
  }

  LinkList links;
  for (std::size_t j = 0; j < m; ++j) {
    auto t = model.tgt_vocab().find(tgt[j]);
    if (!t) continue;
    double best = 0.0;
    std::optional<std::size_t> best_i;
    for (std::size_t i = 0; i < n; ++i) {
      if (!src_ids[i]) continue;
      const double score = model.distortion(i + 1, j + 1, m, n) * model.prob(*src_ids[i], *t);
      if (score > best) {
        best = score;
        best_i = i;
      }
    }
    const double null_score = model.distortion(0, j + 1, m, n) * model.prob(TranslationModel::kNull, *t);
    if (best_i && best >= null_score) links.push_back(Link{*best_i, j});
  }
  return links;
}

AlignmentData align_corpus(const TranslationModel& model, const std::vector<SentencePair>& pairs) {
  if (!model.trained()) throw Error(ErrorCode::UntrainedModel, "align_corpus needs a trained model");
  AlignmentData out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(viterbi_align(model, p));
  return out;
}

std::string write_pharaoh(const AlignmentData& data) {
  std::string out;
  for (const auto& links : data) {
    for (std::size_t k = 0; k < links.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(links[k].src);
      out += '-';
      out += std::to_string(links[k].tgt);
    }
    out += '\n';
  }
  return out;
}

AlignmentData parse_pharaoh(std::string_view content) {
  AlignmentData out;
  std::size_t line_no = 0;
  for (auto line : util::split_lines(content)) {
    ++line_no;
    LinkList links;
    for (auto item : util::split(line, ' ')) {
      if (item.empty()) continue;
      auto dash = item.find('-');
      if (dash == std::string_view::npos) throw Error(ErrorCode::MalformedLine, "link without '-'", line_no);
      Link l;
      auto a = item.substr(0, dash);
      auto b = item.substr(dash + 1);
      auto r1 = std::from_chars(a.data(), a.data() + a.size(), l.src);
      auto r2 = std::from_chars(b.data(), b.data() + b.size(), l.tgt);
      if (a.empty() || b.empty() || r1.ec != std::errc{} || r2.ec != std::errc{} ||
          r1.ptr != a.data() + a.size() || r2.ptr != b.data() + b.size()) {
        throw Error(ErrorCode::MalformedLine, "bad link '" + std::string(item) + "'", line_no);
      }
      links.push_back(l);
    }
    out.push_back(std::move(links));
  }
  return out;
}

}  // namespace imgpivot::align
