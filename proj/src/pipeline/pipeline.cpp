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

#include "imgpivot/pipeline/pipeline.hpp"

#include <chrono>

#include "imgpivot/error.hpp"
#include "imgpivot/selection/review.hpp"
#include "imgpivot/util/io.hpp"
#include "imgpivot/util/rng.hpp"
#include "imgpivot/util/sha256.hpp"
#include "imgpivot/version.hpp"

namespace imgpivot::pipeline {

namespace fs = std::filesystem;

std::uint64_t stage_seed(std::uint64_t master, std::string_view stage) { return util::derive_seed(master, stage); }

nlohmann::json PipelineConfig::to_json() const {
  return {{"src_captions", src_captions.string()},
          {"src_language", src_language},
          {"tgt_captions", tgt_captions.string()},
          {"tgt_language", tgt_language},
          {"out_dir", out_dir.string()},
          {"select_k", select_k},
          {"review_decisions", review_decisions ? nlohmann::json(review_decisions->string()) : nlohmann::json()},
          {"edit_unit", selection::to_string(edit_unit)},
          {"method", pairing::to_string(method)},
          {"seed", seed},
          {"aligner",
           {{"model", align::to_string(aligner.model)},
            {"iterations", aligner.iterations},
            {"diagonal_tension", aligner.diagonal_tension},
            {"null_prob", aligner.null_prob},
            {"prob_floor", aligner.prob_floor}}},
          {"tiers", lexicon::format_tiers(tiers)},
          {"jobs", jobs}};
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "pipeline config must be a JSON object");
  PipelineConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "src_captions") {
        c.src_captions = v.get<std::string>();
      } else if (key == "src_language") {
        c.src_language = v.get<std::string>();
      } else if (key == "tgt_captions") {
        c.tgt_captions = v.get<std::string>();
      } else if (key == "tgt_language") {
        c.tgt_language = v.get<std::string>();
      } else if (key == "out_dir") {
        c.out_dir = v.get<std::string>();
      } else if (key == "select_k") {
        c.select_k = v.get<std::size_t>();
      } else if (key == "review_decisions") {
        if (!v.is_null()) c.review_decisions = v.get<std::string>();
      } else if (key == "edit_unit") {
        c.edit_unit = selection::parse_edit_unit(v.get<std::string>());
      } else if (key == "method") {
        c.method = pairing::parse_method(v.get<std::string>());
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "aligner") {
        for (const auto& [k, a] : v.items()) {
          if (k == "model") {
            c.aligner.model = align::parse_model(a.get<std::string>());
          } else if (k == "iterations") {
            c.aligner.iterations = a.get<int>();
          } else if (k == "diagonal_tension") {
            c.aligner.diagonal_tension = a.get<double>();
          } else if (k == "null_prob") {
            c.aligner.null_prob = a.get<double>();
          } else if (k == "prob_floor") {
            c.aligner.prob_floor = a.get<double>();
          } else {
            throw Error(ErrorCode::InvalidConfig, "unknown aligner key '" + k + "'");
          }
        }
      } else if (key == "tiers") {
        c.tiers = lexicon::parse_tiers(v.get<std::string>());
      } else if (key == "jobs") {
        c.jobs = v.get<unsigned>();
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown pipeline key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  c.aligner.jobs = c.jobs;
  return c;
}

namespace {

nlohmann::json artifact_json(const Artifact& a) {
  return {{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}};
}

Artifact describe(const std::string& name, std::string_view content) {
  return {name, util::sha256_hex(content), content.size()};
}

/// Collects one stage's outputs under `.partial` names and renames them into
/// place only once the whole stage has succeeded.
class StageOutputs {
 public:
  StageOutputs(fs::path dir, std::string stage) : dir_(std::move(dir)), record_{std::move(stage), {}} {}

  void write(const std::string& name, const std::string& content) {
    util::write_file(partial(name), content);
    record_.artifacts.push_back(describe(name, content));
  }

  StageRecord commit() {
    for (const auto& a : record_.artifacts) fs::rename(partial(a.path), dir_ / a.path);
    return record_;
  }

 private:
  fs::path partial(const std::string& name) const { return dir_ / (name + ".partial"); }

  fs::path dir_;
  StageRecord record_;
};

}  // namespace

nlohmann::json Manifest::to_json() const {
  nlohmann::json in = nlohmann::json::array();
  for (const auto& a : inputs) in.push_back(artifact_json(a));
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& a : s.artifacts) files.push_back(artifact_json(a));
    st.push_back({{"stage", s.stage}, {"files", files}});
  }
  return {{"tool", "imgpivot"}, {"version", version}, {"inputs", in}, {"stages", st}};
}

std::string manifest_path(const fs::path& out_dir) { return (out_dir / "manifest.json").string(); }

corpus::CaptionCorpus load_captions(const fs::path& path, const std::string& language) {
  return corpus::group_by_image(corpus::parse_caption_file(util::read_file(path), language));
}

std::vector<align::SentencePair> tokenize_corpus(const pairing::ComparableCorpus& corpus) {
  const auto src = corpus::profile_for(corpus.src_language);
  const auto tgt = corpus::profile_for(corpus.tgt_language);
  std::vector<align::SentencePair> out;
  out.reserve(corpus.pairs.size());
  for (const auto& p : corpus.pairs) {
    out.emplace_back(corpus::normalize(p.src_text, src), corpus::normalize(p.tgt_text, tgt));
  }
  return out;
}

Manifest run_end_to_end(const PipelineConfig& config, const StageLog& log) {
  if (config.out_dir.empty()) throw Error(ErrorCode::InvalidConfig, "out_dir is required");
  if (config.src_language == config.tgt_language) {
    throw Error(ErrorCode::InvalidConfig, "source and target language are both " + config.src_language);
  }
  align::AlignerConfig aligner = config.aligner;
  aligner.jobs = config.jobs;
  align::validate(aligner);
  if (config.tiers.empty()) throw Error(ErrorCode::InvalidConfig, "no dictionary tiers");

  const auto& out = config.out_dir;
  fs::create_directories(out);
  for (const auto* name : {"manifest.json", "manifest.json.partial"}) fs::remove(out / name);
  util::write_file_atomic(out / "pipeline.lock.json", config.to_json().dump(2) + "\n");

  Manifest manifest;
  manifest.version = kVersion;
  auto note = [&](const std::string& stage, nlohmann::json fields) {
    if (log) log(stage, fields);
  };

  std::string stage = "input";
  try {
    const auto tgt_text = util::read_file(config.tgt_captions);
    manifest.inputs.push_back(describe("tgt_captions", tgt_text));
    const auto tgt = corpus::group_by_image(corpus::parse_caption_file(tgt_text, config.tgt_language));

    using clock = std::chrono::steady_clock;
    auto started = clock::now();
    auto elapsed = [&] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - started).count();
    };

    stage = "score";
    started = clock::now();
    StageOutputs score_out(out, stage);
    auto scores = selection::score_corpus(tgt, {config.edit_unit, config.jobs});
    score_out.write("scores.tsv", selection::write_scores_tsv(scores));
    manifest.stages.push_back(score_out.commit());
    note(stage, {{"images", scores.size()}, {"elapsed_ms", elapsed()}});

    stage = "select";
    started = clock::now();
    StageOutputs select_out(out, stage);
    auto chosen = selection::select_lowest(scores, config.select_k);
    std::vector<corpus::ImageRecord> records;
    for (const auto& s : chosen) records.push_back({s.image_id, std::nullopt, corpus::ImageStatus::selected});
    std::size_t pruned = 0;
    if (config.review_decisions) {
      const auto decisions_text = util::read_file(*config.review_decisions);
      manifest.inputs.push_back(describe("review_decisions", decisions_text));
      auto outcome = selection::apply_review(records, selection::parse_review_tsv(decisions_text));
      pruned = outcome.pruned.size();
      records = std::move(outcome.kept);
    }
    std::vector<std::string> kept;
    for (const auto& r : records) kept.push_back(r.id);
    select_out.write("selected.txt", selection::write_id_list(kept));
    manifest.stages.push_back(select_out.commit());
    note(stage, {{"selected", chosen.size()}, {"pruned", pruned}, {"kept", kept.size()}, {"elapsed_ms", elapsed()}});

    stage = "pair";
    started = clock::now();
    StageOutputs pair_out(out, stage);
    if (config.src_captions.empty() || !fs::exists(config.src_captions)) {
      throw Error(ErrorCode::Io, "source captions not found: '" + config.src_captions.string() + "'");
    }
    const auto src_text = util::read_file(config.src_captions);
    manifest.inputs.push_back(describe("src_captions", src_text));
    const auto src = corpus::group_by_image(corpus::parse_caption_file(src_text, config.src_language));
    auto corpus = pairing::build_corpus(src, tgt, kept, config.method, stage_seed(config.seed, "pair"));
    auto files = pairing::serialize_corpus(corpus);
    pair_out.write("corpus.src", files.src);
    pair_out.write("corpus.tgt", files.tgt);
    pair_out.write("corpus.meta.tsv", files.meta);
    manifest.stages.push_back(pair_out.commit());
    note(stage, {{"pairs", corpus.pairs.size()}, {"method", pairing::to_string(config.method)}, {"elapsed_ms", elapsed()}});

    stage = "align";
    started = clock::now();
    StageOutputs align_out(out, stage);
    const auto sentences = tokenize_corpus(corpus);
    auto model = align::train(sentences, aligner);
    auto alignments = align::align_corpus(model, sentences);
    align_out.write("alignments.txt", align::write_pharaoh(alignments));
    align_out.write("model.tsv", model.dump_tsv());
    manifest.stages.push_back(align_out.commit());
    note(stage, {{"pairs", sentences.size()},
                 {"skipped", model.skipped_pairs()},
                 {"log_likelihood", model.log_likelihood_trace().back()},
                 {"elapsed_ms", elapsed()}});

    stage = "dict";
    started = clock::now();
    StageOutputs dict_out(out, stage);
    auto counts = lexicon::count_alignments(alignments, sentences);
    auto dictionary = lexicon::extract_dictionary(counts, config.tiers);
    dict_out.write("dictionary.tsv", lexicon::write_dictionary_tsv(dictionary));
    manifest.stages.push_back(dict_out.commit());
    note(stage, {{"entries", dictionary.size()}, {"elapsed_ms", elapsed()}});
  } catch (const Error& e) {
    auto partial = manifest.to_json();
    partial["failed_stage"] = stage;
    partial["error"] = e.message();
    util::write_file_atomic(out / "manifest.json.partial", partial.dump(2) + "\n");
    throw Error(e.code(), "stage " + stage + ": " + e.message(), e.line());
  }

  util::write_file_atomic(manifest_path(out), manifest.to_json().dump(2) + "\n");
  return manifest;
}

}  // namespace imgpivot::pipeline
