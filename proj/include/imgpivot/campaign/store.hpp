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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "imgpivot/campaign/campaign.hpp"
#include "imgpivot/campaign/journal.hpp"
#include "imgpivot/util/rng.hpp"

namespace imgpivot::campaign {

struct WorkerProfile {
  std::string id;
  std::map<std::string, std::string> attributes;
};

using Clock = std::function<std::int64_t()>;  // ms since the Unix epoch
using EligibilityPredicate = std::function<bool(const CampaignSpec&, const WorkerProfile&)>;

Clock system_clock();

/// Every required attribute must be present with the same value. A campaign
/// without its own requirements falls back to `defaults`.
EligibilityPredicate attribute_filter(std::map<std::string, std::string> defaults);

struct StoreOptions {
  /// Campaign journals live in `<data_dir>/<campaign id>/`. Empty keeps
  /// everything in memory.
  std::filesystem::path data_dir;
  std::int64_t lease_ttl_ms = 15 * 60 * 1000;
  /// Extra active leases allowed on a task beyond its missing submissions.
  std::size_t quota_slack = 1;
  /// Journal events between snapshots; 0 never compacts.
  std::uint64_t compact_every = 10000;
  bool sync = true;
  Clock clock;                     // defaults to the system clock
  EligibilityPredicate eligible;   // defaults to attribute_filter({})
  std::optional<std::uint64_t> lease_id_seed;  // random when unset
};

enum class ExportFormat { captions, ratings };

ExportFormat parse_export_format(std::string_view text);

struct ExportResult {
  std::string body;
  std::size_t complete = 0;
  std::size_t expected = 0;

  std::string completeness() const { return std::to_string(complete) + "/" + std::to_string(expected); }
};

/// Caption file or Likert TSV. A partial export starts with a `#complete\tn/m`
/// header line; a complete one is the bare file. Throws InvalidArgument when
/// the format does not match the campaign kind.
ExportResult export_state(const CampaignState& state, ExportFormat format);

/// All campaigns of one service instance. Mutations on a campaign are
/// serialized and journaled before they become visible; reads share a lock.
class CampaignStore {
 public:
  /// Recovers every campaign found under `options.data_dir`.
  explicit CampaignStore(StoreOptions options);

  std::string create_campaign(CampaignSpec spec);
  void close_campaign(const std::string& campaign_id);

  /// A task payload, or nothing when no task is available to this worker.
  /// Throws CampaignClosed or WorkerIneligible.
  std::optional<nlohmann::json> lease_task(const std::string& campaign_id, const WorkerProfile& worker);

  nlohmann::json submit_caption(const std::string& task_id, const std::string& lease_id, const std::string& text);
  nlohmann::json submit_rating(const std::string& task_id, const std::string& lease_id, int rating);

  /// Marks caption `index` of a task rejected; it stops counting toward the
  /// quota and is left out of exports.
  void reject_caption(const std::string& task_id, std::size_t index, const std::string& reason,
                      const std::string& reviewer);

  ExportResult export_campaign(const std::string& campaign_id, ExportFormat format) const;
  nlohmann::json stats(const std::string& campaign_id) const;

  std::vector<std::string> campaign_ids() const;
  CampaignState state(const std::string& campaign_id) const;
  void compact(const std::string& campaign_id);

  std::int64_t now() const { return options_.clock(); }

 private:
  struct Entry {
    mutable std::shared_mutex mutex;
    CampaignState state;
    std::unique_ptr<Journal> journal;
  };

  Entry& entry(const std::string& campaign_id) const;
  void commit(Entry& e, EventKind kind, nlohmann::json payload, std::optional<std::int64_t> at = std::nullopt);
  std::string next_lease_id();

  StoreOptions options_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::unique_ptr<Entry>> campaigns_;
  std::mutex rng_mutex_;
  util::Rng rng_;
};

}  // namespace imgpivot::campaign
