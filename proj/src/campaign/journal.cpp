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

#include "imgpivot/campaign/journal.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "imgpivot/error.hpp"
#include "imgpivot/util/io.hpp"

namespace imgpivot::campaign {

namespace fs = std::filesystem;

namespace {

struct ParsedLog {
  std::vector<JournalEvent> events;
  std::uint64_t good_bytes = 0;  // prefix made of whole, parsable lines
  bool torn = false;
};

ParsedLog parse_log(std::string_view content) {
  ParsedLog log;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    ++line_no;
    const auto nl = content.find('\n', pos);
    const bool last = nl == std::string_view::npos || nl + 1 == content.size();
    if (nl == std::string_view::npos) {
      log.torn = true;
      break;
    }
    auto line = content.substr(pos, nl - pos);
    auto parsed = nlohmann::json::parse(line, nullptr, false);
    if (parsed.is_discarded()) {
      if (last) {
        log.torn = true;
        break;
      }
      throw Error(ErrorCode::CorruptJournal, "unparsable event", line_no);
    }
    log.events.push_back(JournalEvent::from_json(parsed));
    pos = nl + 1;
    log.good_bytes = pos;
  }
  return log;
}

std::string read_if_exists(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return {};
  return util::read_file(path);
}

[[noreturn]] void sys_error(const std::string& what, const fs::path& path) {
  throw Error(ErrorCode::Io, what + " " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

Recovery recover(const fs::path& dir) {
  Recovery r;
  const auto snapshot = read_if_exists(dir / kSnapshotFile);
  if (!snapshot.empty()) {
    auto j = nlohmann::json::parse(snapshot, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::CorruptJournal, "unparsable snapshot");
    r.state = CampaignState::from_json(j);
  }
  auto log = parse_log(read_if_exists(dir / kJournalFile));
  r.dropped_torn_tail = log.torn;
  for (const auto& e : log.events) {
    if (r.state && e.seq <= r.state->last_seq()) continue;
    if (!r.state) r.state.emplace();
    r.state->apply(e);
    ++r.replayed;
  }
  return r;
}

Journal::Journal(fs::path dir, bool sync) : dir_(std::move(dir)), sync_(sync) {
  fs::create_directories(dir_);
  const auto path = dir_ / kJournalFile;
  auto log = parse_log(read_if_exists(path));
  if (log.torn) {
    if (::truncate(path.c_str(), static_cast<off_t>(log.good_bytes)) != 0) sys_error("truncate", path);
  }
  open_file();
  since_snapshot_ = log.events.size();
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

void Journal::open_file() {
  const auto path = dir_ / kJournalFile;
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) sys_error("open", path);
  struct stat st {};
  if (::fstat(fd_, &st) != 0) sys_error("stat", path);
  size_ = static_cast<std::uint64_t>(st.st_size);
  if (sync_) util::sync_directory(dir_);
}

void Journal::append(const JournalEvent& event) {
  const std::string line = event.to_json().dump() + "\n";
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      [[maybe_unused]] int rc = ::ftruncate(fd_, static_cast<off_t>(size_));
      throw Error(ErrorCode::Io, std::string("journal write: ") + std::strerror(err));
    }
    done += static_cast<std::size_t>(n);
  }
  if (sync_ && ::fdatasync(fd_) != 0) {
    const int err = errno;
    [[maybe_unused]] int rc = ::ftruncate(fd_, static_cast<off_t>(size_));
    throw Error(ErrorCode::Io, std::string("journal fsync: ") + std::strerror(err));
  }
  size_ += line.size();
  ++since_snapshot_;
}

void Journal::compact(const CampaignState& state) {
  util::write_file_atomic(dir_ / kSnapshotFile, state.to_json().dump() + "\n", sync_);
  util::write_file_atomic(dir_ / kJournalFile, "", sync_);
  ::close(fd_);
  fd_ = -1;
  open_file();
  since_snapshot_ = 0;
}

}  // namespace imgpivot::campaign
