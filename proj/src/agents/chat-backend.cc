// Copyright 2026 The LayerCoT Authors.
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

#include "layercot/agents/chat-backend.h"

#include <cstdlib>
#include <regex>
#include <thread>

#include "httplib.h"
#include "layercot/core/error.h"

namespace layercot::agents {
namespace {

const std::regex &UrlPattern() {
  static const std::regex pattern(
      R"(^(https?)://([A-Za-z0-9.\-]+|\[[0-9A-Fa-f:.]+\])(:[0-9]{1,5})?(/[^\s?#]*)?$)");
  return pattern;
}

std::string SystemMessage(RoleKind role) {
  switch (role) {
    case RoleKind::kPlanner:
      return "You decompose questions into ordered, independently checkable "
             "sub-problems.";
    case RoleKind::kReasoner:
      return "You reason carefully about one sub-problem at a time and state "
             "checkable facts as CLAIM lines.";
    default:
      return "You are a careful assistant.";
  }
}

bool Retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

void ChatBackendConfig::Validate() const {
  if (!std::regex_match(base_url, UrlPattern())) {
    throw Error(ErrorCode::kInvalidArgument,
                "chat base_url '" + base_url + "' is not a valid http(s) URL");
  }
  if (model_name.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "chat model_name is empty");
  }
  if (!(timeout_seconds > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "chat timeout must be > 0");
  }
  if (max_retries < 0) {
    throw Error(ErrorCode::kInvalidArgument, "chat max_retries must be >= 0");
  }
}

ChatBackendConfig ChatBackendConfig::FromJson(const core::Json &j) {
  ChatBackendConfig config;
  config.base_url = j.value("base_url", "");
  config.model_name = j.value("model", j.value("model_name", ""));
  config.auth_token_env = j.value("auth_token_env", "");
  config.timeout_seconds = j.value("timeout_seconds", 60.0);
  config.max_retries = j.value("max_retries", 2);
  if (j.contains("retry_backoff_ms")) {
    config.retry_backoff =
        std::chrono::milliseconds(j["retry_backoff_ms"].get<int>());
  }
  return config;
}

ChatBackend::ChatBackend(ChatBackendConfig config)
    : config_(std::move(config)) {
  config_.Validate();
  std::smatch m;
  std::regex_match(config_.base_url, m, UrlPattern());
  scheme_host_port_ = m[1].str() + "://" + m[2].str() + m[3].str();
  path_prefix_ = m[4].str();
  while (!path_prefix_.empty() && path_prefix_.back() == '/') {
    path_prefix_.pop_back();
  }
}

std::string ChatBackend::Complete(const BackendRequest &request) {
  core::Json body{
      {"model", config_.model_name},
      {"messages",
       core::Json::array({{{"role", "system"},
                           {"content", SystemMessage(request.role)}},
                          {{"role", "user"}, {"content", request.prompt}}})}};
  const std::string payload = body.dump();
  const std::string path = path_prefix_ + "/chat/completions";

  httplib::Headers headers;
  if (!config_.auth_token_env.empty()) {
    const char *token = std::getenv(config_.auth_token_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw Error(ErrorCode::kBackend, "environment variable " +
                                           config_.auth_token_env +
                                           " holds no token");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config_.timeout_seconds));
  std::string last_error;
  auto backoff = config_.retry_backoff;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (Retryable(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kBackend,
                  "chat backend returned HTTP " + std::to_string(res->status));
    }
    try {
      auto reply = core::Json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const core::Json::exception &e) {
      throw Error(ErrorCode::kBackend,
                  std::string("malformed chat completion: ") + e.what());
    }
  }
  throw Error(ErrorCode::kBackend,
              "chat backend failed after " +
                  std::to_string(config_.max_retries + 1) +
                  " attempts: " + last_error);
}

}  // namespace layercot::agents
