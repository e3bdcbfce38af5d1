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

#include "imgpivot/campaign/server.hpp"

#include <charconv>
#include <cstdlib>

#include <httplib.h>

#include "imgpivot/util/io.hpp"

namespace imgpivot::campaign {

namespace fs = std::filesystem;

nlohmann::json ServiceConfig::to_json() const {
  return {{"listen", host + ":" + std::to_string(port)},
          {"data_dir", data_dir.string()},
          {"ui_dir", ui_dir.string()},
          {"lease_ttl_seconds", lease_ttl_seconds},
          {"quota_slack", quota_slack},
          {"compact_every", compact_every},
          {"eligibility", eligibility}};
}

StoreOptions ServiceConfig::store_options() const {
  StoreOptions o;
  o.data_dir = data_dir;
  o.lease_ttl_ms = lease_ttl_seconds * 1000;
  o.quota_slack = quota_slack;
  o.compact_every = compact_every;
  o.eligible = attribute_filter(eligibility);
  return o;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

namespace {

template <typename T>
T parse_number(std::string_view text, const std::string& what) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidConfig, what + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

void check(const ServiceConfig& c) {
  if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::InvalidConfig, "port out of range");
  if (c.lease_ttl_seconds <= 0) throw Error(ErrorCode::InvalidConfig, "lease_ttl_seconds must be positive");
  if (c.data_dir.empty()) throw Error(ErrorCode::InvalidConfig, "data_dir is empty");
}

}  // namespace

std::pair<std::string, int> parse_listen(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::InvalidConfig, "listen must be host:port, got '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, colon)), parse_number<int>(text.substr(colon + 1), "listen port")};
}

std::map<std::string, std::string> parse_attributes(std::string_view text) {
  std::map<std::string, std::string> out;
  if (text.empty()) return out;
  for (auto item : util::split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::InvalidConfig, "attribute must be key=value, got '" + std::string(item) + "'");
    }
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
  }
  return out;
}

ServiceConfig load_service_config(const std::optional<fs::path>& file, const EnvLookup& env) {
  ServiceConfig c;
  auto path = file;
  if (!path) {
    if (auto p = env("IMGPIVOT_CONFIG")) path = *p;
  }
  if (path) {
    auto j = nlohmann::json::parse(util::read_file(*path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::InvalidConfig, path->string() + ": not a JSON object");
    }
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "listen") {
          std::tie(c.host, c.port) = parse_listen(value.get<std::string>());
        } else if (key == "data_dir") {
          c.data_dir = value.get<std::string>();
        } else if (key == "ui_dir") {
          c.ui_dir = value.get<std::string>();
        } else if (key == "lease_ttl_seconds") {
          c.lease_ttl_seconds = value.get<std::int64_t>();
        } else if (key == "quota_slack") {
          c.quota_slack = value.get<std::size_t>();
        } else if (key == "compact_every") {
          c.compact_every = value.get<std::uint64_t>();
        } else if (key == "eligibility") {
          c.eligibility = value.get<std::map<std::string, std::string>>();
        } else {
          throw Error(ErrorCode::InvalidConfig, path->string() + ": unknown key '" + key + "'");
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, path->string() + ": " + e.what());
    }
  }
  if (auto v = env("IMGPIVOT_LISTEN")) std::tie(c.host, c.port) = parse_listen(*v);
  if (auto v = env("IMGPIVOT_DATA_DIR")) c.data_dir = *v;
  if (auto v = env("IMGPIVOT_UI_DIR")) c.ui_dir = *v;
  if (auto v = env("IMGPIVOT_LEASE_TTL")) c.lease_ttl_seconds = parse_number<std::int64_t>(*v, "IMGPIVOT_LEASE_TTL");
  if (auto v = env("IMGPIVOT_QUOTA_SLACK")) c.quota_slack = parse_number<std::size_t>(*v, "IMGPIVOT_QUOTA_SLACK");
  if (auto v = env("IMGPIVOT_ELIGIBILITY")) c.eligibility = parse_attributes(*v);
  check(c);
  return c;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidUtf8:
    case ErrorCode::MalformedLine:
      return 400;
    case ErrorCode::WorkerIneligible:
      return 403;
    case ErrorCode::UnknownCampaign:
    case ErrorCode::UnknownTask:
    case ErrorCode::UnknownLease:
    case ErrorCode::IndexOutOfRange:
      return 404;
    case ErrorCode::CampaignClosed:
    case ErrorCode::QuotaExceeded:
      return 409;
    case ErrorCode::LeaseExpired:
      return 410;
    case ErrorCode::EmptySubmission:
      return 422;
    default:
      return 500;
  }
}

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

constexpr const char* kNoBundle =
    "<!doctype html><meta charset=utf-8><title>imgpivot</title>"
    "<p>No annotation UI bundle is installed. The JSON API is available under /campaigns and /tasks.</p>\n";

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, http_status(code), {{"error", to_string(code)}, {"message", message}});
}

nlohmann::json body_of(const httplib::Request& req) {
  auto j = nlohmann::json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  return j;
}

template <typename T>
T field(const nlohmann::json& body, const char* name) {
  if (!body.contains(name)) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + name + "'");
  try {
    return body.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("field '") + name + "' has the wrong type");
  }
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

Handler guarded(Handler inner) {
  return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
    try {
      inner(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.message());
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace

HttpService::HttpService(CampaignStore& store, fs::path ui_dir)
    : store_(store), ui_dir_(std::move(ui_dir)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpService::~HttpService() { stop(); }

void HttpService::install_routes() {
  auto& s = *server_;
  const std::string campaign = "([A-Za-z0-9_]+)";
  const std::string task = "([A-Za-z0-9_]+-[0-9]+)";

  std::error_code ec;
  if (!ui_dir_.empty() && fs::is_directory(ui_dir_, ec)) {
    s.set_mount_point("/", ui_dir_.string());
  } else {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kNoBundle, "text/html"); });
  }

  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"ok", true}}); });

  s.Get("/campaigns", guarded([this](const httplib::Request&, httplib::Response& res) {
          send_json(res, 200, {{"campaigns", store_.campaign_ids()}});
        }));

  s.Post("/campaigns", guarded([this](const httplib::Request& req, httplib::Response& res) {
           auto id = store_.create_campaign(CampaignSpec::from_json(body_of(req)));
           send_json(res, 201, {{"id", id}});
         }));

  s.Post("/campaigns/" + campaign + "/close", guarded([this](const httplib::Request& req, httplib::Response& res) {
           store_.close_campaign(req.matches[1]);
           send_json(res, 200, {{"id", req.matches[1]}, {"status", "closed"}});
         }));

  s.Post("/campaigns/" + campaign + "/lease", guarded([this](const httplib::Request& req, httplib::Response& res) {
           auto body = body_of(req);
           WorkerProfile worker{field<std::string>(body, "worker_id"), {}};
           if (body.contains("attributes")) {
             worker.attributes = field<std::map<std::string, std::string>>(body, "attributes");
           }
           auto payload = store_.lease_task(req.matches[1], worker);
           if (!payload) {
             res.status = 204;
             return;
           }
           send_json(res, 200, *payload);
         }));

  s.Post("/tasks/" + task + "/caption", guarded([this](const httplib::Request& req, httplib::Response& res) {
           auto body = body_of(req);
           send_json(res, 201,
                     store_.submit_caption(req.matches[1], field<std::string>(body, "lease_id"),
                                           field<std::string>(body, "text")));
         }));

  s.Post("/tasks/" + task + "/rating", guarded([this](const httplib::Request& req, httplib::Response& res) {
           auto body = body_of(req);
           send_json(res, 201,
                     store_.submit_rating(req.matches[1], field<std::string>(body, "lease_id"),
                                          field<int>(body, "rating")));
         }));

  s.Post("/tasks/" + task + "/reject", guarded([this](const httplib::Request& req, httplib::Response& res) {
           auto body = body_of(req);
           store_.reject_caption(req.matches[1], field<std::size_t>(body, "index"),
                                 body.value("reason", ""), body.value("reviewer", ""));
           res.status = 204;
         }));

  s.Get("/campaigns/" + campaign + "/export", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto format = req.has_param("format") ? req.get_param_value("format") : "captions";
          auto out = store_.export_campaign(req.matches[1], parse_export_format(format));
          res.status = 200;
          res.set_header("X-Complete", out.completeness());
          res.set_content(out.body, "text/tab-separated-values; charset=utf-8");
        }));

  s.Get("/campaigns/" + campaign + "/stats", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, store_.stats(req.matches[1]));
        }));
}

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpService::listen() { server_->listen_after_bind(); }

int HttpService::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
  return bound;
}

void HttpService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace imgpivot::campaign
