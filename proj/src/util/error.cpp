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

#include "imgpivot/error.hpp"

namespace imgpivot {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::InvalidUtf8: return "InvalidUtf8";
    case ErrorCode::EmptyCaptionSet: return "EmptyCaptionSet";
    case ErrorCode::UnknownImage: return "UnknownImage";
    case ErrorCode::ImageMismatch: return "ImageMismatch";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UntrainedModel: return "UntrainedModel";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyRatings: return "EmptyRatings";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::CampaignClosed: return "CampaignClosed";
    case ErrorCode::WorkerIneligible: return "WorkerIneligible";
    case ErrorCode::LeaseExpired: return "LeaseExpired";
    case ErrorCode::EmptySubmission: return "EmptySubmission";
    case ErrorCode::QuotaExceeded: return "QuotaExceeded";
    case ErrorCode::UnknownCampaign: return "UnknownCampaign";
    case ErrorCode::UnknownTask: return "UnknownTask";
    case ErrorCode::UnknownLease: return "UnknownLease";
    case ErrorCode::CorruptJournal: return "CorruptJournal";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line), message_(message) {}

}  // namespace imgpivot
