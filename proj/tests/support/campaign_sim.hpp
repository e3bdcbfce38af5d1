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

// Randomized drivers for the campaign store. Each returns a list of
// violations; an empty list means every check held.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "imgpivot/campaign/journal.hpp"
#include "imgpivot/campaign/store.hpp"
#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"
#include "testing.hpp"

namespace sim {

namespace cp = imgpivot::campaign;
namespace fs = std::filesystem;

/// English reference captions the caption workers must never see.
inline std::string target_caption(std::size_t image) {
  return "reference caption number " + std::to_string(image) + " about a dog on grass";
}

inline cp::CampaignSpec caption_spec(std::size_t images, int quota) {
  cp::CampaignSpec spec;
  spec.kind = cp::CampaignKind::caption;
  spec.language = "hi";
  spec.quota = quota;
  for (std::size_t i = 0; i < images; ++i) {
    spec.images.push_back({"img" + std::to_string(i), "https://images.example/img" + std::to_string(i) + ".jpg"});
  }
  return spec;
}

inline cp::CampaignSpec rating_spec(std::size_t pairs, int quota) {
  cp::CampaignSpec spec;
  spec.kind = cp::CampaignKind::rating;
  spec.language = "hi-en";
  spec.quota = quota;
  for (std::size_t i = 0; i < pairs; ++i) {
    spec.pairs.push_back({"img" + std::to_string(i / 4), i % 2, i % 3, "कुत्ता घास पर दौड़ता है " + std::to_string(i),
                          target_caption(i)});
  }
  return spec;
}

inline std::vector<std::string> journal_lines(const fs::path& dir) {
  std::vector<std::string> out;
  std::ifstream in(dir / cp::kJournalFile);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

/// Checks that hold for any reachable state.
inline void check_state(const cp::CampaignState& st, std::vector<std::string>& errors, const std::string& where) {
  for (std::size_t t = 0; t < st.task_count(); ++t) {
    const auto& task = st.task(t);
    if (task.accepted() > static_cast<std::size_t>(st.spec().quota)) {
      errors.push_back(where + ": task " + std::to_string(t) + " above quota");
    }
    std::set<std::string> seen;
    for (const auto& s : task.submissions) {
      if (!seen.insert(s.worker_id).second) errors.push_back(where + ": worker " + s.worker_id + " submitted twice");
    }
  }
}

/// One campaign driven by random operations. After every operation the
/// journal on disk must rebuild the live state; afterwards every event
/// prefix, with and without a torn tail, must rebuild the state obtained by
/// applying that prefix. Returns the number of journal events checked.
inline std::size_t crash_replay(std::uint64_t seed, std::vector<std::string>& errors) {
  std::mt19937_64 rng(seed);
  testing::TempDir dir("crash");
  std::int64_t now = 1'700'000'000'000;
  cp::StoreOptions options;
  options.data_dir = dir.path();
  options.sync = false;  // crashes are simulated by truncation, not power loss
  options.compact_every = 0;
  options.lease_ttl_ms = 60'000;
  options.clock = [&now] { return now; };
  options.lease_id_seed = seed;
  cp::CampaignStore store(options);

  const bool captions = rng() % 2 == 0;
  const int quota = 1 + int(rng() % 3);
  const std::size_t tasks = 1 + rng() % 6;
  const auto id = store.create_campaign(captions ? caption_spec(tasks, quota) : rating_spec(tasks, quota));
  const auto campaign_dir = dir.path() / id;

  std::vector<std::pair<std::string, std::string>> leases;  // (task id, lease id)
  const int ops = 20 + int(rng() % 40);
  for (int op = 0; op < ops; ++op) {
    const auto kind = rng() % 10;
    try {
      if (kind < 4) {
        auto payload = store.lease_task(id, {"w" + std::to_string(rng() % 6), {}});
        if (payload) leases.emplace_back((*payload)["task_id"], (*payload)["lease_id"]);
      } else if (kind < 8 && !leases.empty()) {
        const auto& [task, lease] = leases[rng() % leases.size()];
        if (captions) {
          const std::string texts[] = {"एक कुत्ता घास पर दौड़ता है", "  ", "दो बच्चे\nखेलते हैं", "लड़का टोपी पहने है"};
          store.submit_caption(task, lease, texts[rng() % 4]);
        } else {
          store.submit_rating(task, lease, int(rng() % 7));
        }
      } else if (kind == 8) {
        now += std::int64_t(rng() % 90'000);
      } else if (captions && !leases.empty()) {
        store.reject_caption(leases[rng() % leases.size()].first, rng() % 3, "off topic", "reviewer");
      }
    } catch (const imgpivot::Error&) {
      // Rejected operations journal nothing; the replay checks below prove it.
    }
    if (rng() % 25 == 0) store.close_campaign(id);
    auto live = store.state(id);
    check_state(live, errors, "seed " + std::to_string(seed));
    auto rebuilt = cp::recover(campaign_dir);
    if (!rebuilt.state || rebuilt.state->to_json() != live.to_json()) {
      errors.push_back("seed " + std::to_string(seed) + ": journal does not rebuild the live state after op " +
                       std::to_string(op));
      return 0;
    }
  }

  // Kill after every event: truncate the journal to each prefix.
  const auto lines = journal_lines(campaign_dir);
  const auto original = imgpivot::util::read_file(campaign_dir / cp::kJournalFile);
  cp::CampaignState expected;
  for (std::size_t k = 1; k <= lines.size(); ++k) {
    expected.apply(cp::JournalEvent::from_json(nlohmann::json::parse(lines[k - 1])));
    std::string prefix;
    for (std::size_t i = 0; i < k; ++i) prefix += lines[i] + "\n";
    std::string torn = prefix;
    if (k < lines.size()) torn += lines[k].substr(0, 1 + rng() % (lines[k].size() - 1));
    for (const auto& content : {prefix, torn}) {
      imgpivot::util::write_file(campaign_dir / cp::kJournalFile, content);
      auto rebuilt = cp::recover(campaign_dir);
      if (!rebuilt.state || rebuilt.state->to_json() != expected.to_json()) {
        errors.push_back("seed " + std::to_string(seed) + ": prefix " + std::to_string(k) + " does not replay");
      }
      check_state(*rebuilt.state, errors, "prefix " + std::to_string(k));
    }
  }

  // A restarted store truncates the torn tail and carries on.
  imgpivot::util::write_file(campaign_dir / cp::kJournalFile, original + "{\"seq\":");
  {
    cp::CampaignStore restarted(options);
    if (restarted.state(id).to_json() != store.state(id).to_json()) {
      errors.push_back("seed " + std::to_string(seed) + ": restart differs");
    }
    if (store.state(id).status() == cp::CampaignStatus::open) {
      try {
        restarted.lease_task(id, {"fresh_worker", {}});
      } catch (const imgpivot::Error& e) {
        errors.push_back(std::string("lease after restart: ") + e.what());
      }
      if (cp::recover(campaign_dir).dropped_torn_tail) errors.push_back("torn tail survived a restart");
    }
  }

  // Snapshot compaction keeps the same state.
  {
    imgpivot::util::write_file(campaign_dir / cp::kJournalFile, original);
    cp::CampaignStore again(options);
    again.compact(id);
    auto rebuilt = cp::recover(campaign_dir);
    if (!rebuilt.state || rebuilt.state->to_json() != store.state(id).to_json() || rebuilt.replayed != 0) {
      errors.push_back("seed " + std::to_string(seed) + ": compaction changed the state");
    }
  }
  return lines.size();
}

struct ConcurrencyReport {
  std::size_t leases = 0;
  std::size_t submissions = 0;
  std::size_t payloads_scanned = 0;
};

/// `workers` threads lease and caption concurrently until the campaign is
/// full. Every response is scanned for caption text that is not the
/// worker's own and for the target-language reference captions.
inline ConcurrencyReport concurrent_captions(std::size_t workers, std::size_t images, int quota,
                                             std::vector<std::string>& errors) {
  testing::TempDir dir("concurrent");
  cp::StoreOptions options;
  options.data_dir = dir.path();
  options.quota_slack = 2;
  options.lease_ttl_ms = 50;  // leases abandoned by the simulation expire quickly
  options.eligible = cp::attribute_filter({{"country", "IN"}});
  cp::CampaignStore store(options);
  const auto id = store.create_campaign(caption_spec(images, quota));

  std::vector<std::string> forbidden;
  for (std::size_t i = 0; i < images; ++i) forbidden.push_back(target_caption(i));

  std::mutex mu;
  std::vector<std::string> submitted;  // every accepted text so far
  std::atomic<std::size_t> leases{0}, submissions{0}, scanned{0};
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      std::mt19937_64 rng(w);
      const std::string worker = "worker" + std::to_string(w);
      std::vector<std::string> local_errors;
      for (int attempt = 0; attempt < 10000; ++attempt) {
        std::optional<nlohmann::json> payload;
        try {
          payload = store.lease_task(id, {worker, {{"country", "IN"}}});
        } catch (const imgpivot::Error& e) {
          local_errors.push_back(std::string("lease: ") + e.what());
          break;
        }
        if (!payload) {
          if (store.stats(id)["accepted"] == images * std::size_t(quota)) break;
          std::this_thread::sleep_for(std::chrono::milliseconds(2));
          continue;
        }
        ++leases;
        const auto dump = payload->dump();
        {
          std::lock_guard lock(mu);
          for (const auto& text : submitted) {
            if (dump.find(text) != std::string::npos) local_errors.push_back("payload leaks a caption");
          }
        }
        for (const auto& text : forbidden) {
          if (dump.find(text) != std::string::npos) local_errors.push_back("payload leaks target text");
        }
        ++scanned;
        if (rng() % 5 == 0) continue;  // abandon the lease
        const std::string text = "कैप्शन " + worker + " " + (*payload)["image"]["id"].get<std::string>();
        try {
          auto r = store.submit_caption((*payload)["task_id"], (*payload)["lease_id"], text);
          if (r["text"] != text) local_errors.push_back("submit echoed foreign text");
          ++submissions;
          std::lock_guard lock(mu);
          submitted.push_back(text);
        } catch (const imgpivot::Error& e) {
          if (e.code() != imgpivot::ErrorCode::QuotaExceeded && e.code() != imgpivot::ErrorCode::LeaseExpired) {
            local_errors.push_back(std::string("submit: ") + e.what());
          }
        }
        auto st = store.state(id);
        check_state(st, local_errors, worker);
      }
      std::lock_guard lock(mu);
      errors.insert(errors.end(), local_errors.begin(), local_errors.end());
    });
  }
  for (auto& t : threads) t.join();

  try {
    store.lease_task(id, {"outsider", {{"country", "US"}}});
    errors.push_back("ineligible worker got a lease");
  } catch (const imgpivot::Error& e) {
    if (e.code() != imgpivot::ErrorCode::WorkerIneligible) errors.push_back(e.what());
  }
  auto final_state = store.state(id);
  check_state(final_state, errors, "final");
  if (final_state.accepted() != images * std::size_t(quota)) errors.push_back("campaign did not fill");
  if (cp::recover(dir.path() / id).state->to_json() != final_state.to_json()) {
    errors.push_back("journal does not rebuild the concurrent run");
  }
  return {leases.load(), submissions.load(), scanned.load()};
}

}  // namespace sim
