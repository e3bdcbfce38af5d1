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

#include "imgpivot/campaign/store.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "imgpivot/corpus/text.hpp"
#include "imgpivot/error.hpp"
#include "imgpivot/eval/likert.hpp"

namespace imgpivot::campaign {

namespace fs = std::filesystem;

Clock system_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

EligibilityPredicate attribute_filter(std::map<std::string, std::string> defaults) {
  return [defaults = std::move(defaults)](const CampaignSpec& spec, const WorkerProfile& worker) {
    const auto& required = spec.eligibility.empty() ? defaults : spec.eligibility;
    for (const auto& [key, value] : required) {
      auto it = worker.attributes.find(key);
      if (it == worker.attributes.end() || it->second != value) return false;
    }
    return true;
  };
}

ExportFormat parse_export_format(std::string_view text) {
  if (text == "captions") return ExportFormat::captions;
  if (text == "ratings") return ExportFormat::ratings;
  throw Error(ErrorCode::InvalidArgument, "format must be captions or ratings, got '" + std::string(text) + "'");
}

namespace {

std::string trim(std::string_view s) {
  const auto ws = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  return std::string(s.substr(first, s.find_last_not_of(ws) - first + 1));
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (std::uint64_t{rd()} << 32) ^ rd();
}

nlohmann::json likert_criteria() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : eval::likert_categories()) {
    out.push_back({{"value", c.value}, {"label", c.label}, {"criteria", c.criteria}});
  }
  return out;
}

}  // namespace

CampaignStore::CampaignStore(StoreOptions options)
    : options_(std::move(options)), rng_(options_.lease_id_seed.value_or(random_seed())) {
  if (!options_.clock) options_.clock = system_clock();
  if (!options_.eligible) options_.eligible = attribute_filter({});
  if (options_.data_dir.empty()) return;
  fs::create_directories(options_.data_dir);
  std::vector<fs::path> dirs;
  for (const auto& item : fs::directory_iterator(options_.data_dir)) {
    if (item.is_directory() && valid_campaign_id(item.path().filename().string())) dirs.push_back(item.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    auto recovered = recover(dir);
    if (!recovered.state) continue;
    auto e = std::make_unique<Entry>();
    e->state = std::move(*recovered.state);
    e->journal = std::make_unique<Journal>(dir, options_.sync);
    campaigns_.emplace(e->state.spec().id, std::move(e));
  }
}

CampaignStore::Entry& CampaignStore::entry(const std::string& campaign_id) const {
  std::shared_lock lock(map_mutex_);
  auto it = campaigns_.find(campaign_id);
  if (it == campaigns_.end()) throw Error(ErrorCode::UnknownCampaign, "no campaign '" + campaign_id + "'");
  return *it->second;
}

void CampaignStore::commit(Entry& e, EventKind kind, nlohmann::json payload, std::optional<std::int64_t> at) {
  JournalEvent event{e.state.last_seq() + 1, at.value_or(options_.clock()), kind, std::move(payload)};
  if (e.journal) e.journal->append(event);
  e.state.apply(event);
  if (e.journal && options_.compact_every > 0 && e.journal->events_since_snapshot() >= options_.compact_every) {
    e.journal->compact(e.state);
  }
}

std::string CampaignStore::next_lease_id() {
  std::lock_guard lock(rng_mutex_);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng_.next()));
  return buf;
}

std::string CampaignStore::create_campaign(CampaignSpec spec) {
  spec = resolve_spec(std::move(spec));
  std::unique_lock lock(map_mutex_);
  if (spec.id.empty()) {
    for (std::size_t n = campaigns_.size() + 1;; ++n) {
      char buf[24];
      std::snprintf(buf, sizeof buf, "c%04zu", n);
      if (!campaigns_.count(buf)) {
        spec.id = buf;
        break;
      }
    }
  } else if (campaigns_.count(spec.id)) {
    throw Error(ErrorCode::InvalidSpec, "id: campaign '" + spec.id + "' already exists");
  }
  auto e = std::make_unique<Entry>();
  if (!options_.data_dir.empty()) {
    const auto dir = options_.data_dir / spec.id;
    if (fs::exists(dir / kJournalFile) || fs::exists(dir / kSnapshotFile)) {
      throw Error(ErrorCode::InvalidSpec, "id: data for '" + spec.id + "' already on disk");
    }
    e->journal = std::make_unique<Journal>(dir, options_.sync);
  }
  const auto id = spec.id;
  commit(*e, EventKind::campaign_created, spec.to_json());
  campaigns_.emplace(id, std::move(e));
  return id;
}

void CampaignStore::close_campaign(const std::string& campaign_id) {
  auto& e = entry(campaign_id);
  std::unique_lock lock(e.mutex);
  if (e.state.status() == CampaignStatus::closed) return;
  commit(e, EventKind::campaign_closed, nlohmann::json::object());
}

std::optional<nlohmann::json> CampaignStore::lease_task(const std::string& campaign_id, const WorkerProfile& worker) {
  if (worker.id.empty()) throw Error(ErrorCode::InvalidArgument, "worker_id is required");
  auto& e = entry(campaign_id);
  std::unique_lock lock(e.mutex);
  const auto& st = e.state;
  const auto& spec = st.spec();
  if (st.status() == CampaignStatus::closed) throw Error(ErrorCode::CampaignClosed, campaign_id + " is closed");
  if (!options_.eligible(spec, worker)) {
    throw Error(ErrorCode::WorkerIneligible, "worker " + worker.id + " does not meet the campaign requirements");
  }
  const auto now = options_.clock();
  std::vector<std::size_t> active(st.task_count(), 0);
  for (const auto& [id, lease] : st.leases()) active[lease.task] += lease.active(now) ? 1 : 0;

  const auto quota = static_cast<std::size_t>(spec.quota);
  std::optional<std::size_t> best;
  std::size_t best_fill = 0;
  for (std::size_t t = 0; t < st.task_count(); ++t) {
    const auto& task = st.task(t);
    const auto have = task.accepted();
    if (have >= quota || task.workers.count(worker.id)) continue;
    if (active[t] >= quota - have + options_.quota_slack) continue;
    const auto fill = have + active[t];
    if (!best || fill < best_fill) {
      best = t;
      best_fill = fill;
    }
  }
  if (!best) return std::nullopt;

  auto lease_id = next_lease_id();
  while (st.leases().count(lease_id)) lease_id = next_lease_id();
  const auto expires = now + options_.lease_ttl_ms;
  commit(e, EventKind::lease_issued, {{"lease", lease_id}, {"task", *best}, {"worker", worker.id}, {"expires_at", expires}}, now);

  nlohmann::json payload = {{"task_id", task_id(spec.id, *best)},
                            {"lease_id", lease_id},
                            {"campaign_id", spec.id},
                            {"kind", to_string(spec.kind)},
                            {"language", spec.language},
                            {"guidelines", spec.guidelines},
                            {"issued_at", now},
                            {"expires_at", expires}};
  if (spec.kind == CampaignKind::caption) {
    const auto& im = spec.images[*best];
    payload["image"] = {{"id", im.image_id}, {"uri", im.uri}};
    payload["max_chars"] = kMaxCaptionChars;
  } else {
    const auto& p = spec.pairs[*best];
    payload["pair"] = {{"image_id", p.image_id},
                       {"src_index", p.src_index},
                       {"tgt_index", p.tgt_index},
                       {"src_text", p.src_text},
                       {"tgt_text", p.tgt_text}};
    payload["criteria"] = likert_criteria();
  }
  return payload;
}

namespace {

struct LeaseCheck {
  const Lease* lease;
  std::size_t task;
};

LeaseCheck check_lease(const CampaignState& st, std::size_t task, const std::string& lease_id, std::int64_t now) {
  if (task >= st.task_count()) throw Error(ErrorCode::UnknownTask, task_id(st.spec().id, task));
  auto it = st.leases().find(lease_id);
  if (it == st.leases().end() || it->second.task != task) {
    throw Error(ErrorCode::UnknownLease, "lease " + lease_id + " does not belong to " + task_id(st.spec().id, task));
  }
  if (st.status() == CampaignStatus::closed) throw Error(ErrorCode::CampaignClosed, st.spec().id + " is closed");
  if (it->second.consumed) throw Error(ErrorCode::LeaseExpired, "lease " + lease_id + " was already used");
  if (!it->second.active(now)) throw Error(ErrorCode::LeaseExpired, "lease " + lease_id + " expired");
  return {&it->second, task};
}

}  // namespace

nlohmann::json CampaignStore::submit_caption(const std::string& tid, const std::string& lease_id,
                                             const std::string& text) {
  const auto [campaign_id, index] = parse_task_id(tid);
  auto& e = entry(campaign_id);
  std::unique_lock lock(e.mutex);
  const auto& st = e.state;
  if (st.spec().kind != CampaignKind::caption) {
    throw Error(ErrorCode::InvalidArgument, campaign_id + " is not a caption campaign");
  }
  auto check = check_lease(st, index, lease_id, options_.clock());

  const auto clean = trim(text);
  if (!corpus::is_valid_utf8(clean)) throw Error(ErrorCode::InvalidUtf8, "caption is not valid UTF-8");
  if (!corpus::has_visible_text(clean)) throw Error(ErrorCode::EmptySubmission, "caption is empty");
  if (clean.find_first_of("\r\n") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "caption must be a single line");
  }
  if (corpus::decode_utf8(clean).size() > kMaxCaptionChars) {
    throw Error(ErrorCode::InvalidArgument, "caption exceeds " + std::to_string(kMaxCaptionChars) + " characters");
  }
  const auto quota = static_cast<std::size_t>(st.spec().quota);
  if (st.task(index).accepted() >= quota) {
    throw Error(ErrorCode::QuotaExceeded, "image " + st.spec().images[index].image_id + " already has its captions");
  }
  const std::string worker = check.lease->worker_id;
  commit(e, EventKind::caption_submitted, {{"lease", lease_id}, {"text", clean}});
  const auto caption_index = st.task(index).submissions.size() - 1;
  if (st.task(index).accepted() == quota) commit(e, EventKind::image_quota_met, {{"task", index}});
  return {{"task_id", tid},
          {"image_id", st.spec().images[index].image_id},
          {"language", st.spec().language},
          {"index", caption_index},
          {"annotator_id", worker},
          {"text", clean}};
}

nlohmann::json CampaignStore::submit_rating(const std::string& tid, const std::string& lease_id, int rating) {
  const auto [campaign_id, index] = parse_task_id(tid);
  auto& e = entry(campaign_id);
  std::unique_lock lock(e.mutex);
  const auto& st = e.state;
  if (st.spec().kind != CampaignKind::rating) {
    throw Error(ErrorCode::InvalidArgument, campaign_id + " is not a rating campaign");
  }
  auto check = check_lease(st, index, lease_id, options_.clock());
  if (rating < 1 || rating > 5) throw Error(ErrorCode::InvalidArgument, "rating must be within 1..5");
  const auto quota = static_cast<std::size_t>(st.spec().quota);
  if (st.task(index).accepted() >= quota) throw Error(ErrorCode::QuotaExceeded, "pair already rated");
  const std::string worker = check.lease->worker_id;
  commit(e, EventKind::rating_submitted, {{"lease", lease_id}, {"rating", rating}});
  if (st.task(index).accepted() == quota) commit(e, EventKind::image_quota_met, {{"task", index}});
  const auto& p = st.spec().pairs[index];
  return {{"task_id", tid},
          {"image_id", p.image_id},
          {"src_index", p.src_index},
          {"tgt_index", p.tgt_index},
          {"rating", rating},
          {"label", eval::likert_category(rating).label},
          {"rater_id", worker}};
}

void CampaignStore::reject_caption(const std::string& tid, std::size_t index, const std::string& reason,
                                   const std::string& reviewer) {
  const auto [campaign_id, task] = parse_task_id(tid);
  auto& e = entry(campaign_id);
  std::unique_lock lock(e.mutex);
  const auto& st = e.state;
  if (task >= st.task_count()) throw Error(ErrorCode::UnknownTask, tid);
  const auto& subs = st.task(task).submissions;
  if (index >= subs.size()) throw Error(ErrorCode::IndexOutOfRange, "no submission " + std::to_string(index));
  if (subs[index].rejected) return;
  commit(e, EventKind::caption_rejected,
         {{"task", task}, {"index", index}, {"reason", reason}, {"reviewer", reviewer}});
}

ExportResult export_state(const CampaignState& st, ExportFormat format) {
  const auto& spec = st.spec();
  const bool captions = spec.kind == CampaignKind::caption;
  if (captions != (format == ExportFormat::captions)) {
    throw Error(ErrorCode::InvalidArgument, spec.id + " is a " + std::string(to_string(spec.kind)) + " campaign");
  }
  ExportResult out;
  out.expected = st.expected();
  out.complete = st.accepted();
  if (out.complete < out.expected) out.body = "#complete\t" + out.completeness() + "\n";
  if (captions) {
    for (std::size_t t = 0; t < st.task_count(); ++t) {
      const auto& subs = st.task(t).submissions;
      for (std::size_t k = 0; k < subs.size(); ++k) {
        if (subs[k].rejected) continue;
        out.body += spec.images[t].image_id + "#" + std::to_string(k) + "\t" + subs[k].text + "\n";
      }
    }
  } else {
    std::vector<eval::LikertRating> ratings;
    for (std::size_t t = 0; t < st.task_count(); ++t) {
      const auto& p = spec.pairs[t];
      for (const auto& s : st.task(t).submissions) {
        if (!s.rejected) ratings.push_back({{p.image_id, p.src_index, p.tgt_index}, s.rating, s.worker_id});
      }
    }
    out.body += eval::write_likert_tsv(ratings);
  }
  return out;
}

ExportResult CampaignStore::export_campaign(const std::string& campaign_id, ExportFormat format) const {
  auto& e = entry(campaign_id);
  std::shared_lock lock(e.mutex);
  return export_state(e.state, format);
}

nlohmann::json CampaignStore::stats(const std::string& campaign_id) const {
  auto& e = entry(campaign_id);
  std::shared_lock lock(e.mutex);
  const auto& st = e.state;
  const auto now = options_.clock();
  std::map<std::string, std::size_t> per_worker;
  std::size_t rejected = 0, complete_tasks = 0, active = 0;
  for (std::size_t t = 0; t < st.task_count(); ++t) {
    const auto& task = st.task(t);
    for (const auto& s : task.submissions) {
      if (s.rejected) {
        ++rejected;
      } else {
        ++per_worker[s.worker_id];
      }
    }
    complete_tasks += task.accepted() >= static_cast<std::size_t>(st.spec().quota) ? 1 : 0;
  }
  for (const auto& [id, lease] : st.leases()) active += lease.active(now) ? 1 : 0;
  const double pct = st.expected() ? 100.0 * double(st.accepted()) / double(st.expected()) : 0.0;
  return {{"id", st.spec().id},
          {"kind", to_string(st.spec().kind)},
          {"status", to_string(st.status())},
          {"tasks", st.task_count()},
          {"quota", st.spec().quota},
          {"expected", st.expected()},
          {"accepted", st.accepted()},
          {"rejected", rejected},
          {"complete_tasks", complete_tasks},
          {"completion_percent", std::round(pct * 100.0) / 100.0},
          {"active_leases", active},
          {"workers", per_worker},
          {"last_seq", st.last_seq()}};
}

std::vector<std::string> CampaignStore::campaign_ids() const {
  std::shared_lock lock(map_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, e] : campaigns_) out.push_back(id);
  return out;
}

CampaignState CampaignStore::state(const std::string& campaign_id) const {
  auto& e = entry(campaign_id);
  std::shared_lock lock(e.mutex);
  return e.state;
}

void CampaignStore::compact(const std::string& campaign_id) {
  auto& e = entry(campaign_id);
  std::unique_lock lock(e.mutex);
  if (e.journal) e.journal->compact(e.state);
}

}  // namespace imgpivot::campaign
