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

// Application configuration and construction of engines from it.
//
// A config file is JSON; every key is optional:
//
//   {
//     "engine": {"max_layers": 5, "max_refinements": 2,
//                "verification_mode": "hybrid", "backend": "chat",
//                "on_exhausted": "fail_session"},
//     "chat": {"base_url": "https://host/v1", "model": "...",
//              "auth_token_env": "LAYERCOT_API_TOKEN"},
//     "facts": "kb.facts",
//     "scenarios_dir": "scenarios",
//     "storage_root": "/var/lib/layercot"
//   }
//
// Relative paths are resolved against the file's directory.

#ifndef LAYERCOT_SERVICE_CONFIG_H_
#define LAYERCOT_SERVICE_CONFIG_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "layercot/agents/chat-backend.h"
#include "layercot/agents/scripted-backend.h"
#include "layercot/core/engine.h"
#include "layercot/core/types.h"
#include "layercot/knowledge/fact-store.h"

namespace layercot::service {

inline constexpr char kStorageRootEnv[] = "LAYERCOT_STORAGE_ROOT";

struct AppConfig {
  core::EngineConfig engine;
  std::optional<agents::ChatBackendConfig> chat;
  // Fact store for chat-backed sessions. Scripted scenarios bring their own.
  std::filesystem::path facts;
  std::filesystem::path scenarios_dir;
  std::filesystem::path storage_root;

  // Throws Error(kParse) or Error(kInvalidArgument).
  static AppConfig FromJson(const core::Json &doc,
                            const std::filesystem::path &base_dir);
  static AppConfig LoadFile(const std::filesystem::path &path);
};

// Builds engines for sessions. Engines are cached per (backend, scenario).
class EngineFactory {
 public:
  explicit EngineFactory(AppConfig config, core::Clock clock = core::SystemClock());

  // backend "scripted" needs a scenario; "chat" needs the chat settings.
  // Throws kNotFound for an unknown scenario and kInvalidArgument otherwise.
  std::shared_ptr<const core::Engine> For(
      const core::EngineConfig &config,
      const std::optional<std::string> &scenario);

  const AppConfig &config() const { return config_; }
  // Empty catalog when no scenarios directory is configured.
  const agents::ScenarioCatalog &catalog() const { return *catalog_; }

 private:
  std::shared_ptr<const knowledge::FactStore> ChatFacts();

  AppConfig config_;
  core::Clock clock_;
  std::unique_ptr<agents::ScenarioCatalog> catalog_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const core::Engine>> engines_;
  std::shared_ptr<const knowledge::FactStore> chat_facts_;
};

}  // namespace layercot::service

#endif  // LAYERCOT_SERVICE_CONFIG_H_
