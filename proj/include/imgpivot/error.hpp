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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace imgpivot {

enum class ErrorCode {
  // corpus_core
  MalformedLine,
  DuplicateKey,
  InvalidUtf8,
  // image_selection
  EmptyCaptionSet,
  UnknownImage,
  // pairing
  ImageMismatch,
  EmptySide,
  DegenerateSplit,
  // word_aligner
  EmptyCorpus,
  InvalidConfig,
  UntrainedModel,
  // lexicon_extractor
  IndexOutOfRange,
  // eval_suite
  LengthMismatch,
  InvalidArgument,
  EmptyRatings,
  // campaign_service
  InvalidSpec,
  CampaignClosed,
  WorkerIneligible,
  LeaseExpired,
  EmptySubmission,
  QuotaExceeded,
  UnknownCampaign,
  UnknownTask,
  UnknownLease,
  CorruptJournal,
  // general
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a code that callers (the CLI
/// and the HTTP layer) map onto exit statuses and response codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  /// The message without the code and line decoration of what().
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string message_;
};

}  // namespace imgpivot
