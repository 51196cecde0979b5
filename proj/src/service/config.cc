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

#include "layercot/service/config.h"

#include <fstream>
#include <sstream>

#include "layercot/core/error.h"

namespace layercot::service {
namespace {

std::filesystem::path Resolve(const core::Json &doc, const char *key,
                              const std::filesystem::path &base_dir) {
  if (!doc.contains(key) || doc[key].is_null()) return {};
  std::filesystem::path path = doc[key].get<std::string>();
  if (path.empty() || path.is_absolute() || base_dir.empty()) return path;
  return base_dir / path;
}

}  // namespace

AppConfig AppConfig::FromJson(const core::Json &doc,
                              const std::filesystem::path &base_dir) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, "config must be a JSON object");
  }
  AppConfig config;
  try {
    if (doc.contains("engine")) from_json(doc["engine"], config.engine);
    if (doc.contains("chat") && !doc["chat"].is_null()) {
      config.chat = agents::ChatBackendConfig::FromJson(doc["chat"]);
    }
    config.facts = Resolve(doc, "facts", base_dir);
    config.scenarios_dir = Resolve(doc, "scenarios_dir", base_dir);
    config.storage_root = Resolve(doc, "storage_root", base_dir);
  } catch (const core::Json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  config.engine.Validate();
  return config;
}

AppConfig AppConfig::LoadFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  core::Json doc;
  try {
    doc = core::Json::parse(buf.str());
  } catch (const core::Json::exception &e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return FromJson(doc, path.parent_path());
}

EngineFactory::EngineFactory(AppConfig config, core::Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      catalog_(std::make_unique<agents::ScenarioCatalog>(config_.scenarios_dir)) {}

std::shared_ptr<const knowledge::FactStore> EngineFactory::ChatFacts() {
  if (!chat_facts_) {
    chat_facts_ = std::make_shared<const knowledge::FactStore>(
        config_.facts.empty() ? knowledge::FactStore()
                              : knowledge::FactStore::LoadFile(config_.facts));
  }
  return chat_facts_;
}

std::shared_ptr<const core::Engine> EngineFactory::For(
    const core::EngineConfig &config,
    const std::optional<std::string> &scenario) {
  std::lock_guard lock(mu_);
  const std::string key = config.backend + "\x1f" + scenario.value_or("");
  if (auto it = engines_.find(key); it != engines_.end()) return it->second;

  std::shared_ptr<const core::Engine> engine;
  if (config.backend == "scripted") {
    if (!scenario) {
      throw Error(ErrorCode::kInvalidArgument,
                  "the scripted backend needs a scenario");
    }
    auto script = catalog_->Get(*scenario);
    auto facts = std::make_shared<const knowledge::FactStore>(
        script->facts_file.empty()
            ? knowledge::FactStore()
            : knowledge::FactStore::LoadFile(script->facts_file));
    engine = std::make_shared<const core::Engine>(
        agents::Agents::Single(std::make_shared<agents::ScriptedBackend>(script)),
        std::move(facts), clock_);
  } else if (config.backend == "chat") {
    if (!config_.chat) {
      throw Error(ErrorCode::kInvalidArgument,
                  "the chat backend is not configured");
    }
    engine = std::make_shared<const core::Engine>(
        agents::Agents::Single(std::make_shared<agents::ChatBackend>(*config_.chat)),
        ChatFacts(), clock_);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown backend '" + config.backend + "'");
  }
  engines_.emplace(key, engine);
  return engine;
}

}  // namespace layercot::service
