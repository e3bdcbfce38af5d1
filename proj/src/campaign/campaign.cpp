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

#include "imgpivot/campaign/campaign.hpp"

#include <charconv>

#include "imgpivot/error.hpp"
#include "imgpivot/eval/likert.hpp"

namespace imgpivot::campaign {

std::string_view to_string(CampaignKind kind) {
  return kind == CampaignKind::caption ? "caption" : "rating";
}

std::string_view to_string(CampaignStatus status) {
  return status == CampaignStatus::open ? "open" : "closed";
}

std::vector<std::string> builtin_guidelines(std::string_view language) {
  if (language == "en") {
    return {
        "You must describe each image with one sentence.",
        "Please provide an accurate description of the activities, people, animals and objects you see "
        "depicted in the image.",
        "Each description must be a single sentence.",
        "The description should be written using Hindi script.",
        "Try to be concise.",
        "If you don't know the meaning of a concept in Hindi, you can use English to express it.",
        "Please pay attention to grammar and spelling.",
        "You don't have to use perfect Hindi for this task. Describe the image as you see fit.",
    };
  }
  if (language == "hi") {
    return {
        "आपको एक वाक्य के साथ हर छवि का वर्णन करना होगा।",
        "कृपया उन गतिविधियों, लोगों, जानवरों और वस्तुओं का सटीक विवरण प्रदान करें जिन्हें आप चित्र में देख रहे हैं",
        "प्रत्येक विवरण एक ही वाक्य का होना चाहिए।",
        "विवरण हिंदी में लिखा जाना चाहिए।",
        "संक्षिप्त होने का प्रयास करें।",
        "अगर किसी शब्द का हिंदी में मतलब ना पता हो तो उसे इंग्लिश में ही लिख दें",
        "व्याकरण और वर्तनी पर ध्यान दें।",
        "छवि के वर्णन में शुद्ध हिंदी का उपयोग करना ज़रूरी नहीं है जैसा ठीक लगे लिखें",
    };
  }
  return {};
}

bool valid_campaign_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

nlohmann::json CampaignSpec::to_json() const {
  nlohmann::json j = {{"id", id},
                      {"kind", to_string(kind)},
                      {"language", language},
                      {"quota", quota},
                      {"guidelines", guidelines},
                      {"eligibility", eligibility}};
  if (kind == CampaignKind::caption) {
    auto& arr = j["images"] = nlohmann::json::array();
    for (const auto& im : images) arr.push_back({{"id", im.image_id}, {"uri", im.uri}});
  } else {
    auto& arr = j["pairs"] = nlohmann::json::array();
    for (const auto& p : pairs) {
      arr.push_back({{"image_id", p.image_id},
                     {"src_index", p.src_index},
                     {"tgt_index", p.tgt_index},
                     {"src_text", p.src_text},
                     {"tgt_text", p.tgt_text}});
    }
  }
  return j;
}

CampaignSpec CampaignSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "spec must be a JSON object");
  CampaignSpec s;
  try {
    s.id = j.value("id", "");
    const std::string kind = j.value("kind", "caption");
    if (kind == "caption") {
      s.kind = CampaignKind::caption;
    } else if (kind == "rating") {
      s.kind = CampaignKind::rating;
    } else {
      throw Error(ErrorCode::InvalidSpec, "kind: expected caption or rating, got '" + kind + "'");
    }
    s.language = j.value("language", "");
    s.quota = j.value("quota", s.kind == CampaignKind::caption ? 5 : 1);
    if (j.contains("images")) {
      for (const auto& im : j.at("images")) {
        if (im.is_string()) {
          s.images.push_back({im.get<std::string>(), ""});
        } else {
          s.images.push_back({im.at("id").get<std::string>(), im.value("uri", "")});
        }
      }
    }
    if (j.contains("pairs")) {
      for (const auto& p : j.at("pairs")) {
        s.pairs.push_back({p.at("image_id").get<std::string>(), p.at("src_index").get<std::size_t>(),
                           p.at("tgt_index").get<std::size_t>(), p.at("src_text").get<std::string>(),
                           p.at("tgt_text").get<std::string>()});
      }
    }
    if (j.contains("guidelines")) s.guidelines = j.at("guidelines").get<std::vector<std::string>>();
    if (j.contains("eligibility")) s.eligibility = j.at("eligibility").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
  return s;
}

CampaignSpec resolve_spec(CampaignSpec spec) {
  std::vector<std::string> problems;
  if (!spec.id.empty() && !valid_campaign_id(spec.id)) problems.push_back("id: use 1-64 of [A-Za-z0-9_]");
  if (spec.quota < 1) problems.push_back("quota: must be >= 1");
  if (spec.kind == CampaignKind::caption) {
    if (spec.images.empty()) problems.push_back("images: inventory is empty");
    if (!spec.pairs.empty()) problems.push_back("pairs: not allowed in a caption campaign");
    if (spec.language.empty()) problems.push_back("language: required for caption campaigns");
    std::set<std::string> seen;
    for (const auto& im : spec.images) {
      if (im.image_id.empty()) problems.push_back("images: empty image id");
      if (!seen.insert(im.image_id).second) problems.push_back("images: duplicate id " + im.image_id);
    }
    if (spec.guidelines.empty()) spec.guidelines = builtin_guidelines(spec.language);
    if (spec.guidelines.empty()) problems.push_back("guidelines: none given and none built in for '" + spec.language + "'");
  } else {
    if (spec.pairs.empty()) problems.push_back("pairs: inventory is empty");
    if (!spec.images.empty()) problems.push_back("images: not allowed in a rating campaign");
    if (spec.guidelines.empty()) {
      for (const auto& c : eval::likert_categories()) {
        spec.guidelines.push_back(std::to_string(c.value) + " " + std::string(c.label) + ": " + std::string(c.criteria));
      }
    }
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::InvalidSpec, msg);
  }
  return spec;
}

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::campaign_created, "campaign_created"},   {EventKind::lease_issued, "lease_issued"},
    {EventKind::caption_submitted, "caption_submitted"}, {EventKind::rating_submitted, "rating_submitted"},
    {EventKind::image_quota_met, "image_quota_met"},     {EventKind::campaign_closed, "campaign_closed"},
    {EventKind::caption_rejected, "caption_rejected"},
};

[[noreturn]] void corrupt(const JournalEvent& e, const std::string& why) {
  throw Error(ErrorCode::CorruptJournal, "event " + std::to_string(e.seq) + " (" + std::string(to_string(e.kind)) +
                                             "): " + why);
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kEventNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

EventKind parse_event_kind(std::string_view text) {
  for (const auto& [k, name] : kEventNames) {
    if (name == text) return k;
  }
  throw Error(ErrorCode::CorruptJournal, "unknown event kind '" + std::string(text) + "'");
}

nlohmann::json JournalEvent::to_json() const {
  return {{"seq", seq}, {"ts", timestamp}, {"kind", to_string(kind)}, {"payload", payload}};
}

JournalEvent JournalEvent::from_json(const nlohmann::json& j) {
  try {
    JournalEvent e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.timestamp = j.at("ts").get<std::int64_t>();
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.payload = j.at("payload");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::CorruptJournal, ex.what());
  }
}

std::size_t TaskState::accepted() const {
  std::size_t n = 0;
  for (const auto& s : submissions) n += s.rejected ? 0 : 1;
  return n;
}

std::size_t CampaignState::active_leases(std::size_t task, std::int64_t now) const {
  std::size_t n = 0;
  for (const auto& [id, lease] : leases_) n += lease.task == task && lease.active(now) ? 1 : 0;
  return n;
}

std::size_t CampaignState::accepted() const {
  std::size_t n = 0;
  for (const auto& t : tasks_) n += t.accepted();
  return n;
}

void CampaignState::apply(const JournalEvent& e) {
  if (e.seq != last_seq_ + 1) {
    corrupt(e, "expected seq " + std::to_string(last_seq_ + 1));
  }
  if ((e.kind == EventKind::campaign_created) != (last_seq_ == 0)) {
    corrupt(e, "campaign_created must be the first event and only the first");
  }
  try {
    const auto& p = e.payload;
    auto task_at = [&](const nlohmann::json& v) -> TaskState& {
      const auto index = v.get<std::size_t>();
      if (index >= tasks_.size()) corrupt(e, "task out of range");
      return tasks_[index];
    };
    auto lease_at = [&]() -> Lease& {
      auto it = leases_.find(p.at("lease").get<std::string>());
      if (it == leases_.end()) corrupt(e, "unknown lease");
      if (it->second.consumed) corrupt(e, "lease already consumed");
      return it->second;
    };
    switch (e.kind) {
      case EventKind::campaign_created:
        spec_ = CampaignSpec::from_json(p);
        tasks_.assign(spec_.kind == CampaignKind::caption ? spec_.images.size() : spec_.pairs.size(), {});
        break;
      case EventKind::lease_issued: {
        Lease lease{p.at("lease").get<std::string>(), p.at("task").get<std::size_t>(),
                    p.at("worker").get<std::string>(), e.timestamp, p.at("expires_at").get<std::int64_t>()};
        task_at(p.at("task")).workers.insert(lease.worker_id);
        if (!leases_.emplace(lease.id, lease).second) corrupt(e, "duplicate lease id");
        break;
      }
      case EventKind::caption_submitted:
      case EventKind::rating_submitted: {
        Lease& lease = lease_at();
        lease.consumed = true;
        Submission s;
        s.worker_id = lease.worker_id;
        s.seq = e.seq;
        if (e.kind == EventKind::caption_submitted) {
          s.text = p.at("text").get<std::string>();
        } else {
          s.rating = p.at("rating").get<int>();
        }
        tasks_[lease.task].submissions.push_back(std::move(s));
        break;
      }
      case EventKind::image_quota_met:
        if (task_at(p.at("task")).accepted() < static_cast<std::size_t>(spec_.quota)) corrupt(e, "quota not met");
        break;
      case EventKind::campaign_closed:
        status_ = CampaignStatus::closed;
        break;
      case EventKind::caption_rejected: {
        auto& task = task_at(p.at("task"));
        const auto index = p.at("index").get<std::size_t>();
        if (index >= task.submissions.size()) corrupt(e, "submission out of range");
        task.submissions[index].rejected = true;
        task.submissions[index].reason = p.value("reason", "");
        break;
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    corrupt(e, ex.what());
  } catch (const Error& ex) {
    if (ex.code() == ErrorCode::CorruptJournal) throw;
    corrupt(e, ex.what());
  }
  last_seq_ = e.seq;
}

nlohmann::json CampaignState::to_json() const {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : tasks_) {
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& s : t.submissions) {
      subs.push_back({{"worker", s.worker_id},
                      {"text", s.text},
                      {"rating", s.rating},
                      {"seq", s.seq},
                      {"rejected", s.rejected},
                      {"reason", s.reason}});
    }
    tasks.push_back({{"submissions", subs}, {"workers", t.workers}});
  }
  nlohmann::json leases = nlohmann::json::array();
  for (const auto& [id, l] : leases_) {
    leases.push_back({{"id", l.id},
                      {"task", l.task},
                      {"worker", l.worker_id},
                      {"issued_at", l.issued_at},
                      {"expires_at", l.expires_at},
                      {"consumed", l.consumed}});
  }
  return {{"spec", spec_.to_json()},
          {"status", to_string(status_)},
          {"last_seq", last_seq_},
          {"tasks", tasks},
          {"leases", leases}};
}

CampaignState CampaignState::from_json(const nlohmann::json& j) {
  try {
    CampaignState s;
    s.spec_ = CampaignSpec::from_json(j.at("spec"));
    s.status_ = j.at("status").get<std::string>() == "open" ? CampaignStatus::open : CampaignStatus::closed;
    s.last_seq_ = j.at("last_seq").get<std::uint64_t>();
    for (const auto& t : j.at("tasks")) {
      TaskState task;
      for (const auto& sub : t.at("submissions")) {
        task.submissions.push_back({sub.at("worker").get<std::string>(), sub.at("text").get<std::string>(),
                                    sub.at("rating").get<int>(), sub.at("seq").get<std::uint64_t>(),
                                    sub.at("rejected").get<bool>(), sub.at("reason").get<std::string>()});
      }
      task.workers = t.at("workers").get<std::set<std::string>>();
      s.tasks_.push_back(std::move(task));
    }
    for (const auto& l : j.at("leases")) {
      Lease lease{l.at("id").get<std::string>(),       l.at("task").get<std::size_t>(),
                  l.at("worker").get<std::string>(),   l.at("issued_at").get<std::int64_t>(),
                  l.at("expires_at").get<std::int64_t>(), l.at("consumed").get<bool>()};
      s.leases_.emplace(lease.id, lease);
    }
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::CorruptJournal, std::string("snapshot: ") + ex.what());
  } catch (const Error& ex) {
    throw Error(ErrorCode::CorruptJournal, std::string("snapshot: ") + ex.what());
  }
}

std::string task_id(std::string_view campaign_id, std::size_t index) {
  return std::string(campaign_id) + "-" + std::to_string(index);
}

std::pair<std::string, std::size_t> parse_task_id(std::string_view id) {
  const auto dash = id.rfind('-');
  if (dash == std::string_view::npos || dash == 0) {
    throw Error(ErrorCode::UnknownTask, "malformed task id '" + std::string(id) + "'");
  }
  auto digits = id.substr(dash + 1);
  std::size_t index = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw Error(ErrorCode::UnknownTask, "malformed task id '" + std::string(id) + "'");
  }
  return {std::string(id.substr(0, dash)), index};
}

}  // namespace imgpivot::campaign
