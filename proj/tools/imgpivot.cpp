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

// imgpivot command-line entry point. Data goes to files or stdout, logs go to
// stderr as JSON lines. Exit status: 0 success, 1 runtime failure, 2 usage.

#include <signal.h>

#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imgpivot/align/aligner.hpp"
#include "imgpivot/campaign/journal.hpp"
#include "imgpivot/campaign/server.hpp"
#include "imgpivot/campaign/store.hpp"
#include "imgpivot/corpus/caption.hpp"
#include "imgpivot/error.hpp"
#include "imgpivot/eval/bleu.hpp"
#include "imgpivot/eval/cost.hpp"
#include "imgpivot/eval/likert.hpp"
#include "imgpivot/eval/ttest.hpp"
#include "imgpivot/lexicon/lexicon.hpp"
#include "imgpivot/pairing/pairing.hpp"
#include "imgpivot/pipeline/pipeline.hpp"
#include "imgpivot/selection/complexity.hpp"
#include "imgpivot/selection/review.hpp"
#include "imgpivot/util/io.hpp"
#include "imgpivot/version.hpp"

namespace fs = std::filesystem;
using namespace imgpivot;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool quiet = false;
};

Globals g;

void log(const std::string& event, json fields = json::object()) {
  if (g.quiet) return;
  fields["event"] = event;
  std::cerr << fields.dump() << '\n';
}

void emit(const std::optional<std::string>& out, const std::string& content) {
  if (out) {
    util::write_file(*out, content);
  } else {
    std::cout << content;
  }
}

void report(bool as_json, const json& j, const std::string& table) {
  if (as_json) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << table;
  }
}

corpus::CaptionCorpus load(const std::string& path, const std::string& lang) {
  return pipeline::load_captions(path, lang);
}

std::vector<corpus::TokenList> read_sentences(const std::string& path, const std::string& lang, bool pretokenized) {
  std::vector<corpus::TokenList> out;
  const auto profile = corpus::profile_for(lang);
  const auto content = util::read_file(path);
  for (auto line : util::split_lines(content)) {
    if (pretokenized) {
      corpus::TokenList toks;
      for (auto t : util::split(line, ' ')) {
        if (!t.empty()) toks.emplace_back(t);
      }
      out.push_back(std::move(toks));
    } else {
      out.push_back(corpus::normalize(line, profile));
    }
  }
  return out;
}

std::vector<double> read_numbers(const std::string& path) {
  std::vector<double> out;
  std::size_t line_no = 0;
  const auto content = util::read_file(path);
  for (auto line : util::split_lines(content)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    double v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size()) {
      throw Error(ErrorCode::MalformedLine, path + ": not a number", line_no);
    }
    out.push_back(v);
  }
  return out;
}

struct CorpusArgs {
  std::string prefix;
  std::string src_lang = "hi";
  std::string tgt_lang = "en";

  void add(CLI::App* cmd) {
    cmd->add_option("--corpus", prefix, "corpus prefix (<prefix>.src, .tgt, .meta.tsv)")->required();
    cmd->add_option("--src-lang", src_lang, "source language code")->capture_default_str();
    cmd->add_option("--tgt-lang", tgt_lang, "target language code")->capture_default_str();
  }
  pairing::ComparableCorpus read() const { return pairing::read_corpus(prefix, src_lang, tgt_lang); }
};

int serve(campaign::ServiceConfig config) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  campaign::CampaignStore store(config.store_options());
  campaign::HttpService service(store, config.ui_dir);
  const int port = service.bind(config.host, config.port);
  log("serve", {{"listen", config.host + ":" + std::to_string(port)},
                {"campaigns", store.campaign_ids().size()},
                {"config", config.to_json()}});
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    log("shutdown", {{"signal", sig}});
    service.stop();
  });
  service.listen();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comparable corpora from image captions: selection, collection, pairing, alignment, evaluation."};
  app.name("imgpivot");
  app.require_subcommand(0, 1);
  app.fallthrough();
  bool version = false;
  app.add_flag("--version", version, "print version information as JSON and exit");
  app.add_option("--seed", g.seed, "master seed; each stage uses derive_seed(seed, stage)")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for scoring and alignment")->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  app.add_flag("--quiet", g.quiet, "no log lines on stderr");
  std::function<int()> action;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "validate a caption file and print a summary");
  std::string in_captions, in_lang;
  std::optional<std::string> in_out;
  ingest->add_option("--captions", in_captions, "caption file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--lang", in_lang, "language code")->required();
  ingest->add_option("--out", in_out, "write the captions back in canonical order");
  ingest->callback([&] {
    action = [&] {
      auto captions = corpus::parse_caption_file(util::read_file(in_captions), in_lang);
      auto grouped = corpus::group_by_image(captions);
      std::size_t tokens = 0, min_set = SIZE_MAX, max_set = 0;
      std::vector<corpus::Caption> ordered;
      for (const auto& [id, set] : grouped) {
        min_set = std::min(min_set, set.size());
        max_set = std::max(max_set, set.size());
        for (const auto& c : set.captions) {
          tokens += c.tokens().size();
          ordered.push_back(c);
        }
      }
      if (in_out) util::write_file(*in_out, corpus::serialize_caption_file(ordered));
      std::cout << json{{"language", in_lang},
                        {"images", grouped.size()},
                        {"captions", captions.size()},
                        {"tokens", tokens},
                        {"min_per_image", grouped.empty() ? 0 : min_set},
                        {"max_per_image", max_set}}
                       .dump(2)
                << '\n';
      return 0;
    };
  });

  // score
  auto* score = app.add_subcommand("score", "compute caption complexity scores");
  std::string sc_captions, sc_lang = "en", sc_unit = "char";
  std::optional<std::string> sc_out;
  score->add_option("--captions", sc_captions, "caption file")->required()->check(CLI::ExistingFile);
  score->add_option("--lang", sc_lang, "language code")->capture_default_str();
  score->add_option("--edit-unit", sc_unit, "edit distance over characters or tokens")
      ->check(CLI::IsMember({"char", "token"}))
      ->capture_default_str();
  score->add_option("--out", sc_out, "scores TSV (default stdout)");
  score->callback([&] {
    action = [&] {
      auto scores = selection::score_corpus(load(sc_captions, sc_lang), {selection::parse_edit_unit(sc_unit), g.jobs});
      emit(sc_out, selection::write_scores_tsv(scores));
      log("score", {{"images", scores.size()}});
      return 0;
    };
  });

  // select
  auto* select = app.add_subcommand("select", "keep the k lowest-scoring images");
  std::string se_scores;
  std::size_t se_k = 0;
  std::optional<std::string> se_out;
  select->add_option("--scores", se_scores, "scores TSV")->required()->check(CLI::ExistingFile);
  select->add_option("--k", se_k, "number of images")->required();
  select->add_option("--out", se_out, "image id list (default stdout)");
  select->callback([&] {
    action = [&] {
      auto chosen = selection::select_lowest(selection::parse_scores_tsv(util::read_file(se_scores)), se_k);
      std::vector<std::string> ids;
      for (const auto& s : chosen) ids.push_back(s.image_id);
      emit(se_out, selection::write_id_list(ids));
      log("select", {{"k", se_k}, {"selected", ids.size()}});
      return 0;
    };
  });

  // review
  auto* review = app.add_subcommand("review", "apply manual keep/prune decisions to a selection");
  std::string rv_selected, rv_decisions;
  std::optional<std::string> rv_out;
  review->add_option("--selected", rv_selected, "image id list")->required()->check(CLI::ExistingFile);
  review->add_option("--decisions", rv_decisions, "TSV image_id, keep|prune, reason")->required()
      ->check(CLI::ExistingFile);
  review->add_option("--out", rv_out, "kept image ids (default stdout)");
  review->callback([&] {
    action = [&] {
      std::vector<corpus::ImageRecord> records;
      for (auto& id : selection::parse_id_list(util::read_file(rv_selected))) {
        records.push_back({id, std::nullopt, corpus::ImageStatus::selected});
      }
      auto outcome = selection::apply_review(records, selection::parse_review_tsv(util::read_file(rv_decisions)));
      std::vector<std::string> kept;
      for (const auto& r : outcome.kept) kept.push_back(r.id);
      emit(rv_out, selection::write_id_list(kept));
      log("review", {{"kept", kept.size()}, {"pruned", outcome.pruned.size()}});
      return 0;
    };
  });

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "run the caption and rating campaign service");
  std::optional<std::string> sv_config, sv_listen, sv_data, sv_ui, sv_elig;
  std::optional<std::int64_t> sv_ttl;
  std::optional<std::size_t> sv_slack;
  serve_cmd->add_option("--config", sv_config, "JSON config file")->check(CLI::ExistingFile);
  serve_cmd->add_option("--listen", sv_listen, "host:port");
  serve_cmd->add_option("--data-dir", sv_data, "journal directory");
  serve_cmd->add_option("--ui-dir", sv_ui, "static UI bundle served at /");
  serve_cmd->add_option("--lease-ttl", sv_ttl, "lease lifetime in seconds");
  serve_cmd->add_option("--quota-slack", sv_slack, "extra leases allowed per task");
  serve_cmd->add_option("--eligibility", sv_elig, "required worker attributes, key=value[,key=value]");
  serve_cmd->footer(
      "Settings resolve as: command line, then IMGPIVOT_* environment variables, then the config file, then "
      "defaults.");
  serve_cmd->callback([&] {
    action = [&] {
      std::optional<fs::path> file;
      if (sv_config) file = *sv_config;
      auto config = campaign::load_service_config(file, campaign::process_env());
      if (sv_listen) std::tie(config.host, config.port) = campaign::parse_listen(*sv_listen);
      if (sv_data) config.data_dir = *sv_data;
      if (sv_ui) config.ui_dir = *sv_ui;
      if (sv_ttl) config.lease_ttl_seconds = *sv_ttl;
      if (sv_slack) config.quota_slack = *sv_slack;
      if (sv_elig) config.eligibility = campaign::parse_attributes(*sv_elig);
      return serve(config);
    };
  });

  // export
  auto* export_cmd = app.add_subcommand("export", "export a campaign from its journal without a running service");
  std::string ex_data, ex_campaign, ex_format = "captions";
  std::optional<std::string> ex_out;
  export_cmd->add_option("--data-dir", ex_data, "service data directory")->required()->check(CLI::ExistingDirectory);
  export_cmd->add_option("--campaign", ex_campaign, "campaign id")->required();
  export_cmd->add_option("--format", ex_format, "captions or ratings")
      ->check(CLI::IsMember({"captions", "ratings"}))
      ->capture_default_str();
  export_cmd->add_option("--out", ex_out, "output file (default stdout)");
  export_cmd->callback([&] {
    action = [&] {
      if (!campaign::valid_campaign_id(ex_campaign)) {
        throw Error(ErrorCode::UnknownCampaign, "bad campaign id '" + ex_campaign + "'");
      }
      auto recovered = campaign::recover(fs::path(ex_data) / ex_campaign);
      if (!recovered.state) throw Error(ErrorCode::UnknownCampaign, "no campaign '" + ex_campaign + "'");
      auto result = campaign::export_state(*recovered.state, campaign::parse_export_format(ex_format));
      emit(ex_out, result.body);
      log("export", {{"campaign", ex_campaign}, {"complete", result.completeness()}});
      return 0;
    };
  });

  // pair
  auto* pair = app.add_subcommand("pair", "pair captions of the same image across languages");
  std::string pa_src, pa_tgt, pa_src_lang = "hi", pa_tgt_lang = "en", pa_method = "random", pa_out;
  std::optional<std::string> pa_images;
  pair->add_option("--src", pa_src, "source-language caption file")->required()->check(CLI::ExistingFile);
  pair->add_option("--tgt", pa_tgt, "target-language caption file")->required()->check(CLI::ExistingFile);
  pair->add_option("--src-lang", pa_src_lang, "source language code")->capture_default_str();
  pair->add_option("--tgt-lang", pa_tgt_lang, "target language code")->capture_default_str();
  pair->add_option("--images", pa_images, "image id list (default: every image with source captions)")
      ->check(CLI::ExistingFile);
  pair->add_option("--method", pa_method, "cross or random")
      ->check(CLI::IsMember({"cross", "random"}))
      ->capture_default_str();
  pair->add_option("--out", pa_out, "output prefix")->required();
  pair->callback([&] {
    action = [&] {
      auto src = load(pa_src, pa_src_lang);
      auto tgt = load(pa_tgt, pa_tgt_lang);
      std::vector<std::string> ids;
      if (pa_images) {
        ids = selection::parse_id_list(util::read_file(*pa_images));
      } else {
        for (const auto& [id, set] : src) ids.push_back(id);
      }
      auto corpus = pairing::build_corpus(src, tgt, ids, pairing::parse_method(pa_method),
                                          pipeline::stage_seed(g.seed, "pair"));
      pairing::write_corpus(corpus, pa_out);
      log("pair", {{"images", ids.size()}, {"pairs", corpus.pairs.size()}, {"method", pa_method}});
      return 0;
    };
  });

  // split
  auto* split = app.add_subcommand("split", "image-level train/test split of a comparable corpus");
  CorpusArgs sp_corpus;
  double sp_fraction = 0.1;
  std::string sp_train, sp_test;
  sp_corpus.add(split);
  split->add_option("--test-fraction", sp_fraction, "share of images in the test side")->capture_default_str();
  split->add_option("--train", sp_train, "train output prefix")->required();
  split->add_option("--test", sp_test, "test output prefix")->required();
  split->callback([&] {
    action = [&] {
      auto [train, test] = pairing::split_corpus(sp_corpus.read(), sp_fraction, pipeline::stage_seed(g.seed, "split"));
      pairing::write_corpus(train, sp_train);
      pairing::write_corpus(test, sp_test);
      log("split", {{"train_pairs", train.pairs.size()}, {"test_pairs", test.pairs.size()}});
      return 0;
    };
  });

  // align
  auto* align_cmd = app.add_subcommand("align", "train the EM word aligner and write Viterbi links");
  CorpusArgs al_corpus;
  align::AlignerConfig al_config;
  std::string al_model = "diagonal", al_out;
  std::optional<std::string> al_model_out;
  al_corpus.add(align_cmd);
  align_cmd->add_option("--model", al_model, "model1 or diagonal")
      ->check(CLI::IsMember({"model1", "diagonal"}))
      ->capture_default_str();
  align_cmd->add_option("--iterations", al_config.iterations, "EM iterations")->capture_default_str();
  align_cmd->add_option("--tension", al_config.diagonal_tension, "diagonal tension")->capture_default_str();
  align_cmd->add_option("--null-prob", al_config.null_prob, "NULL alignment probability (diagonal)")
      ->capture_default_str();
  align_cmd->add_option("--out", al_out, "Pharaoh alignment file")->required();
  align_cmd->add_option("--model-out", al_model_out, "translation table dump");
  align_cmd->callback([&] {
    action = [&] {
      al_config.model = align::parse_model(al_model);
      al_config.jobs = g.jobs;
      auto sentences = pipeline::tokenize_corpus(al_corpus.read());
      auto model = align::train(sentences, al_config);
      util::write_file(al_out, align::write_pharaoh(align::align_corpus(model, sentences)));
      if (al_model_out) util::write_file(*al_model_out, model.dump_tsv());
      log("align", {{"pairs", sentences.size()},
                    {"skipped", model.skipped_pairs()},
                    {"log_likelihood", model.log_likelihood_trace()}});
      return 0;
    };
  });

  // dict
  auto* dict = app.add_subcommand("dict", "extract a bilingual dictionary from alignments");
  CorpusArgs di_corpus;
  std::string di_alignments, di_tiers = lexicon::format_tiers(lexicon::default_tiers());
  std::optional<std::string> di_out;
  di_corpus.add(dict);
  dict->add_option("--alignments", di_alignments, "Pharaoh alignment file")->required()->check(CLI::ExistingFile);
  dict->add_option("--tiers", di_tiers, "p:c threshold tiers, comma separated")->capture_default_str();
  dict->add_option("--out", di_out, "dictionary TSV (default stdout)");
  dict->callback([&] {
    action = [&] {
      auto sentences = pipeline::tokenize_corpus(di_corpus.read());
      auto counts = lexicon::count_alignments(align::parse_pharaoh(util::read_file(di_alignments)), sentences);
      auto entries = lexicon::extract_dictionary(counts, lexicon::parse_tiers(di_tiers));
      emit(di_out, lexicon::write_dictionary_tsv(entries));
      log("dict", {{"entries", entries.size()}, {"tiers", di_tiers}});
      return 0;
    };
  });

  // dict-score
  auto* dict_score = app.add_subcommand("dict-score", "precision of a dictionary against manual judgments");
  std::string ds_dict, ds_judgments;
  bool ds_json = false;
  dict_score->add_option("--dictionary", ds_dict, "dictionary TSV")->required()->check(CLI::ExistingFile);
  dict_score->add_option("--judgments", ds_judgments, "TSV src, tgt, 0|1")->required()->check(CLI::ExistingFile);
  dict_score->add_flag("--json", ds_json, "JSON output");
  dict_score->callback([&] {
    action = [&] {
      auto r = lexicon::score_dictionary(lexicon::parse_dictionary_tsv(util::read_file(ds_dict)),
                                         lexicon::parse_judgments_tsv(util::read_file(ds_judgments)));
      json j = {{"entries", r.entries},
                {"judged", r.judged},
                {"correct", r.correct},
                {"unjudged", r.unjudged},
                {"precision", r.precision ? json(*r.precision) : json()},
                {"summary", r.summary()}};
      report(ds_json, j,
             "precision: " + r.summary() + "\nentries: " + std::to_string(r.entries) +
                 "  unjudged: " + std::to_string(r.unjudged) + "\n");
      return 0;
    };
  });

  // bleu
  auto* bleu_cmd = app.add_subcommand("bleu", "corpus BLEU of a hypothesis file");
  std::string bl_hyp, bl_lang = "en", bl_ref_length = "shortest";
  std::vector<std::string> bl_refs;
  eval::BleuOptions bl_options;
  bool bl_pretok = false, bl_json = false;
  bleu_cmd->add_option("--hyp", bl_hyp, "hypothesis file, one sentence per line")->required()
      ->check(CLI::ExistingFile);
  bleu_cmd->add_option("--ref", bl_refs, "reference file, repeatable")->required()->check(CLI::ExistingFile);
  bleu_cmd->add_option("--lang", bl_lang, "language profile for tokenization")->capture_default_str();
  bleu_cmd->add_flag("--pretokenized", bl_pretok, "split on spaces only");
  bleu_cmd->add_flag("--smooth", bl_options.smooth, "add-one smoothing for n >= 2");
  bleu_cmd->add_option("--max-n", bl_options.max_n, "largest n-gram order")->capture_default_str();
  bleu_cmd->add_option("--ref-length", bl_ref_length, "shortest or closest")
      ->check(CLI::IsMember({"shortest", "closest"}))
      ->capture_default_str();
  bleu_cmd->add_flag("--json", bl_json, "JSON output");
  bleu_cmd->callback([&] {
    action = [&] {
      bl_options.ref_length = bl_ref_length == "closest" ? eval::RefLength::closest : eval::RefLength::shortest;
      auto hyps = read_sentences(bl_hyp, bl_lang, bl_pretok);
      eval::References refs(hyps.size());
      for (const auto& path : bl_refs) {
        auto lines = read_sentences(path, bl_lang, bl_pretok);
        if (lines.size() != hyps.size()) {
          throw Error(ErrorCode::LengthMismatch, path + " has " + std::to_string(lines.size()) + " lines, expected " +
                                                     std::to_string(hyps.size()));
        }
        for (std::size_t k = 0; k < lines.size(); ++k) refs[k].push_back(std::move(lines[k]));
      }
      auto r = eval::bleu(hyps, refs, bl_options);
      json j = {{"bleu", r.score},
                {"precisions", r.precisions},
                {"brevity_penalty", r.brevity_penalty},
                {"hyp_length", r.stats.hyp_length},
                {"ref_length", r.stats.ref_length}};
      char buf[256];
      std::snprintf(buf, sizeof buf, "BLEU = %.2f  BP = %.4f  hyp_len = %lld  ref_len = %lld\n", r.score,
                    r.brevity_penalty, static_cast<long long>(r.stats.hyp_length),
                    static_cast<long long>(r.stats.ref_length));
      std::string table = buf;
      for (std::size_t n = 0; n < r.precisions.size(); ++n) {
        std::snprintf(buf, sizeof buf, "p%zu = %.4f (%lld/%lld)\n", n + 1, r.precisions[n],
                      static_cast<long long>(r.stats.matches[n]), static_cast<long long>(r.stats.totals[n]));
        table += buf;
      }
      report(bl_json, j, table);
      return 0;
    };
  });

  // likert
  auto* likert = app.add_subcommand("likert", "summarize 1-5 translation quality ratings");
  std::string lk_ratings;
  bool lk_json = false;
  likert->add_option("--ratings", lk_ratings, "TSV image_id, src_index, tgt_index, rating, rater_id")->required()
      ->check(CLI::ExistingFile);
  likert->add_flag("--json", lk_json, "JSON output");
  likert->callback([&] {
    action = [&] {
      auto s = eval::likert_summary(eval::parse_likert_tsv(util::read_file(lk_ratings)));
      report(lk_json, s.to_json(), s.table());
      return 0;
    };
  });

  // ttest
  auto* ttest = app.add_subcommand("ttest", "paired two-sided t-test of two score lists");
  std::string tt_a, tt_b;
  double tt_alpha = 0.05;
  bool tt_json = false;
  ttest->add_option("--a", tt_a, "first system scores, one per line")->required()->check(CLI::ExistingFile);
  ttest->add_option("--b", tt_b, "second system scores, one per line")->required()->check(CLI::ExistingFile);
  ttest->add_option("--alpha", tt_alpha, "significance level")->capture_default_str();
  ttest->add_flag("--json", tt_json, "JSON output");
  ttest->callback([&] {
    action = [&] {
      auto a = read_numbers(tt_a), b = read_numbers(tt_b);
      auto r = eval::paired_t_test(a, b, tt_alpha);
      char buf[200];
      std::snprintf(buf, sizeof buf, "t = %.4f  df = %zu  p = %.4g  %s at alpha = %g\n", r.t, r.df, r.p_value,
                    r.significant ? "significant" : "not significant", tt_alpha);
      report(tt_json, r.to_json(), buf);
      return 0;
    };
  });

  // cost
  auto* cost = app.add_subcommand("cost", "crowd versus professional translation cost");
  eval::CostInputs co_inputs;
  bool co_json = false;
  cost->add_option("--captions", co_inputs.n_captions, "captions collected")->capture_default_str();
  cost->add_option("--total-cost", co_inputs.total_cost, "crowd cost in USD")->capture_default_str();
  cost->add_option("--minutes-per-caption", co_inputs.avg_minutes_per_caption, "average minutes per caption")
      ->capture_default_str();
  cost->add_option("--words", co_inputs.total_words, "words to translate")->capture_default_str();
  cost->add_option("--per-word-rate", co_inputs.pro_per_word_rate, "professional USD per word")
      ->capture_default_str();
  cost->add_option("--hourly-rate", co_inputs.pro_hourly_rate, "professional USD per hour")->capture_default_str();
  cost->add_flag("--json", co_json, "JSON output");
  cost->callback([&] {
    action = [&] {
      auto r = eval::cost_report(co_inputs);
      report(co_json, r.to_json(), r.table());
      return 0;
    };
  });

  // run
  auto* run = app.add_subcommand("run", "score, select, pair, align and extract a dictionary in one go");
  std::optional<std::string> ru_config, ru_src, ru_tgt, ru_src_lang, ru_tgt_lang, ru_out, ru_method, ru_review;
  std::optional<std::size_t> ru_k;
  run->add_option("--config", ru_config, "pipeline JSON config")->check(CLI::ExistingFile);
  run->add_option("--src", ru_src, "source-language caption file");
  run->add_option("--tgt", ru_tgt, "target-language caption file (drives selection)");
  run->add_option("--src-lang", ru_src_lang, "source language code");
  run->add_option("--tgt-lang", ru_tgt_lang, "target language code");
  run->add_option("--out-dir", ru_out, "output directory");
  run->add_option("--k", ru_k, "images to select");
  run->add_option("--method", ru_method, "cross or random")->check(CLI::IsMember({"cross", "random"}));
  run->add_option("--review", ru_review, "review decisions TSV");
  run->callback([&] {
    action = [&] {
      pipeline::PipelineConfig config;
      if (ru_config) config = pipeline::PipelineConfig::from_json(json::parse(util::read_file(*ru_config)));
      if (ru_src) config.src_captions = *ru_src;
      if (ru_tgt) config.tgt_captions = *ru_tgt;
      if (ru_src_lang) config.src_language = *ru_src_lang;
      if (ru_tgt_lang) config.tgt_language = *ru_tgt_lang;
      if (ru_out) config.out_dir = *ru_out;
      if (ru_k) config.select_k = *ru_k;
      if (ru_method) config.method = pairing::parse_method(*ru_method);
      if (ru_review) config.review_decisions = *ru_review;
      if (app.count("--seed")) config.seed = g.seed;
      if (app.count("--jobs")) config.jobs = g.jobs;
      auto manifest = pipeline::run_end_to_end(config, [](const std::string& stage, const json& fields) {
        json f = fields;
        f["stage"] = stage;
        log("stage", f);
      });
      std::cout << manifest.to_json().dump(2) << '\n';
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (version) {
    std::cout << json{{"name", "imgpivot"}, {"version", kVersion}}.dump() << '\n';
    return 0;
  }
  try {
    if (!action) {
      std::cerr << "imgpivot: a subcommand is required\n" << app.help();
      return 2;
    }
    return action();
  } catch (const Error& e) {
    log("error", {{"code", to_string(e.code())}, {"message", e.message()}});
    std::cerr << "imgpivot: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "imgpivot: " << e.what() << '\n';
    return 1;
  }
}
