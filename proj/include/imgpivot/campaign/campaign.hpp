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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace imgpivot::campaign {

enum class CampaignKind { caption, rating };
enum class CampaignStatus { open, closed };

std::string_view to_string(CampaignKind kind);
std::string_view to_string(CampaignStatus status);

/// Longest accepted caption, in code points.
inline constexpr std::size_t kMaxCaptionChars = 500;

/// Built-in caption guidelines for `language` ("en", "hi"); empty if none.
std::vector<std::string> builtin_guidelines(std::string_view language);

struct ImageTask {
  std::string image_id;
  std::string uri;
};

struct PairTask {
  std::string image_id;
  std::size_t src_index = 0;
  std::size_t tgt_index = 0;
  std::string src_text;
  std::string tgt_text;
};

/// What a client posts to create a campaign. Exactly one of `images` and
/// `pairs` is used, depending on `kind`.
struct CampaignSpec {
  std::string id;  // generated when empty
  CampaignKind kind = CampaignKind::caption;
  std::string language;
  int quota = 5;
  std::vector<ImageTask> images;
  std::vector<PairTask> pairs;
  std::vector<std::string> guidelines;  // filled from builtins when empty
  std::map<std::string, std::string> eligibility;  // required worker attributes

  nlohmann::json to_json() const;
  static CampaignSpec from_json(const nlohmann::json& j);
};

/// Checks and completes a spec; throws InvalidSpec listing every bad field.
CampaignSpec resolve_spec(CampaignSpec spec);

bool valid_campaign_id(std::string_view id);

enum class EventKind {
  campaign_created,
  lease_issued,
  caption_submitted,
  rating_submitted,
  image_quota_met,
  campaign_closed,
  caption_rejected,
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct JournalEvent {
  std::uint64_t seq = 0;
  std::int64_t timestamp = 0;  // ms since the Unix epoch
  EventKind kind = EventKind::campaign_created;
  nlohmann::json payload;

  nlohmann::json to_json() const;
  static JournalEvent from_json(const nlohmann::json& j);
};

struct Lease {
  std::string id;
  std::size_t task = 0;
  std::string worker_id;
  std::int64_t issued_at = 0;
  std::int64_t expires_at = 0;
  bool consumed = false;

  bool active(std::int64_t now) const { return !consumed && now < expires_at; }
};

struct Submission {
  std::string worker_id;
  std::string text;  // caption campaigns
  int rating = 0;    // rating campaigns
  std::uint64_t seq = 0;
  bool rejected = false;
  std::string reason;
};

struct TaskState {
  std::vector<Submission> submissions;  // index in this vector is the caption index
  std::set<std::string> workers;        // every worker ever leased this task

  std::size_t accepted() const;
};

/// Everything the service knows about one campaign. Changes only through
/// apply(), so replaying the journal rebuilds it exactly.
class CampaignState {
 public:
  const CampaignSpec& spec() const { return spec_; }
  CampaignStatus status() const { return status_; }
  std::uint64_t last_seq() const { return last_seq_; }
  std::size_t task_count() const { return tasks_.size(); }
  const TaskState& task(std::size_t index) const { return tasks_.at(index); }
  const std::map<std::string, Lease>& leases() const { return leases_; }

  std::size_t active_leases(std::size_t task, std::int64_t now) const;
  std::size_t expected() const { return tasks_.size() * static_cast<std::size_t>(spec_.quota); }
  std::size_t accepted() const;

  /// Throws CorruptJournal for an event that does not fit the state.
  void apply(const JournalEvent& event);

  nlohmann::json to_json() const;
  static CampaignState from_json(const nlohmann::json& j);

 private:
  CampaignSpec spec_;
  CampaignStatus status_ = CampaignStatus::open;
  std::uint64_t last_seq_ = 0;
  std::vector<TaskState> tasks_;
  std::map<std::string, Lease> leases_;
};

std::string task_id(std::string_view campaign_id, std::size_t index);

/// Splits "<campaign>-<index>"; throws UnknownTask when malformed.
std::pair<std::string, std::size_t> parse_task_id(std::string_view id);

}  // namespace imgpivot::campaign
