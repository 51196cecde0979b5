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

#ifndef LAYERCOT_AGENTS_CHAT_BACKEND_H_
#define LAYERCOT_AGENTS_CHAT_BACKEND_H_

#include <chrono>
#include <string>

#include "layercot/agents/backend.h"
#include "layercot/core/types.h"

namespace layercot::agents {

struct ChatBackendConfig {
  // e.g. "https://api.example.com/v1"; requests go to <base_url>/chat/completions.
  std::string base_url;
  std::string model_name;
  // Name of the environment variable holding the bearer token. The token
  // itself never appears in configuration.
  std::string auth_token_env;
  double timeout_seconds = 60.0;
  int max_retries = 2;
  // Delay before the first retry; doubles on each further retry.
  std::chrono::milliseconds retry_backoff{200};

  // Throws Error(kInvalidArgument) for a malformed base_url, an empty model
  // name, a non-positive timeout or negative retries.
  void Validate() const;

  static ChatBackendConfig FromJson(const core::Json &j);
};

// OpenAI-style chat completion client. Each call POSTs
//
//   {"model": ..., "messages": [{"role": "system", ...},
//                               {"role": "user", "content": <prompt>}]}
//
// and returns choices[0].message.content. Transport errors, 429 and 5xx are
// retried up to max_retries times; other statuses fail immediately.
class ChatBackend : public Backend {
 public:
  explicit ChatBackend(ChatBackendConfig config);

  std::string Complete(const BackendRequest &request) override;
  std::string name() const override { return "chat:" + config_.model_name; }

  const ChatBackendConfig &config() const { return config_; }

 private:
  ChatBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace layercot::agents

#endif  // LAYERCOT_AGENTS_CHAT_BACKEND_H_
