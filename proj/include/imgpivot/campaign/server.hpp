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
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "imgpivot/campaign/store.hpp"
#include "imgpivot/error.hpp"

namespace httplib {
class Server;
}

namespace imgpivot::campaign {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "campaign-data";
  std::filesystem::path ui_dir = "ui";
  std::int64_t lease_ttl_seconds = 15 * 60;
  std::size_t quota_slack = 1;
  std::uint64_t compact_every = 10000;
  std::map<std::string, std::string> eligibility;

  nlohmann::json to_json() const;
  StoreOptions store_options() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_env();

/// Defaults, then the JSON file (if any), then IMGPIVOT_* environment
/// variables. Command-line flags are applied on top by the caller.
///
///   IMGPIVOT_CONFIG        config file used when `file` is empty
///   IMGPIVOT_LISTEN        host:port
///   IMGPIVOT_DATA_DIR      journal directory
///   IMGPIVOT_UI_DIR        static bundle served at /
///   IMGPIVOT_LEASE_TTL     seconds
///   IMGPIVOT_QUOTA_SLACK   extra leases per task
///   IMGPIVOT_ELIGIBILITY   key=value[,key=value...]
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env);

/// "host:port"; throws InvalidConfig.
std::pair<std::string, int> parse_listen(std::string_view text);

/// "k=v,k=v"; throws InvalidConfig.
std::map<std::string, std::string> parse_attributes(std::string_view text);

/// Response status for an error code.
int http_status(ErrorCode code);

/// The HTTP API in front of a CampaignStore.
class HttpService {
 public:
  HttpService(CampaignStore& store, std::filesystem::path ui_dir);
  ~HttpService();

  /// Binds to `host`; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); blocks.
  void listen();
  /// bind() then listen() on a background thread.
  int start(const std::string& host, int port);
  void stop();

 private:
  void install_routes();

  CampaignStore& store_;
  std::filesystem::path ui_dir_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace imgpivot::campaign
