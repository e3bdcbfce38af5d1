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
#include <optional>

#include "imgpivot/campaign/campaign.hpp"

namespace imgpivot::campaign {

/// On-disk layout of one campaign directory.
inline constexpr const char* kJournalFile = "journal.jsonl";
inline constexpr const char* kSnapshotFile = "snapshot.json";

struct Recovery {
  std::optional<CampaignState> state;  // empty if nothing was ever committed
  std::size_t replayed = 0;            // journal events applied on top of the snapshot
  bool dropped_torn_tail = false;
};

/// Rebuilds a campaign from `dir`: the snapshot if present, then every later
/// journal event. A final line that is unterminated or unparsable is a write
/// cut short by a crash and is dropped; anything else malformed throws
/// CorruptJournal. Does not modify the files.
Recovery recover(const std::filesystem::path& dir);

/// Append-only JSON-lines event log, one event per line.
class Journal {
 public:
  /// Opens (creating if needed) the journal in `dir` and truncates a torn
  /// tail left by an earlier crash. With `sync`, every append is fsynced
  /// before it returns.
  Journal(std::filesystem::path dir, bool sync);
  ~Journal();

  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  /// Durable once this returns. On failure the file is cut back to its prior
  /// length and Io is thrown.
  void append(const JournalEvent& event);

  /// Writes `state` as the snapshot and starts an empty journal. Both steps
  /// are atomic renames; a crash between them leaves events the snapshot
  /// already covers, which recovery skips.
  void compact(const CampaignState& state);

  std::uint64_t events_since_snapshot() const { return since_snapshot_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  void open_file();

  std::filesystem::path dir_;
  bool sync_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
  std::uint64_t since_snapshot_ = 0;
};

}  // namespace imgpivot::campaign
