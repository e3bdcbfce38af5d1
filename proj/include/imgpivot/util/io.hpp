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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace imgpivot::util {

std::string read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

/// Writes to a sibling temporary, optionally fsyncs it, then renames over
/// `path`. Readers never observe a half-written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content,
                       bool sync = true);

/// fsyncs a directory so a rename inside it survives power loss.
void sync_directory(const std::filesystem::path& dir);

/// Splits LF-terminated text into lines. A missing final LF is tolerated; the
/// empty string yields no lines.
std::vector<std::string_view> split_lines(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace imgpivot::util
