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

#include "layercot/agents/scripted-backend.h"

#include <algorithm>
#include <fstream>

#include "layercot/core/error.h"

namespace layercot::agents {

std::string FormatKey(const ScriptKey &key) {
  return "(" + std::string(Name(key.step)) + ", layer " +
         std::to_string(key.layer) + ", attempt " +
         std::to_string(key.attempt) + ")";
}

ScriptedScenario ScriptedScenario::FromJson(
    const core::Json &doc, const std::filesystem::path &base_dir) {
  ScriptedScenario scenario;
  try {
    scenario.name = doc.at("name").get<std::string>();
    if (doc.contains("query")) scenario.query = doc["query"].get<std::string>();
    scenario.domain_tag = doc.value("domain_tag", "");
    scenario.planned_layers =
        doc.value("layers", std::vector<std::string>{});
    for (const auto &entry : doc.value("responses", core::Json::array())) {
      ScriptKey key;
      key.step = ParsePipelineStep(entry.at("step").get<std::string>());
      key.layer = entry.value("layer", 0);
      key.attempt = entry.value("attempt", 1);
      if (key.layer < 0 || key.attempt < 1) {
        throw Error(ErrorCode::kParse,
                    "bad response key " + FormatKey(key) + " in scenario " +
                        scenario.name);
      }
      auto [it, inserted] =
          scenario.responses.emplace(key, entry.at("text").get<std::string>());
      if (!inserted) {
        throw Error(ErrorCode::kParse, "duplicate response " + FormatKey(key) +
                                           " in scenario " + scenario.name);
      }
    }
    if (doc.contains("facts") && !doc["facts"].is_null()) {
      std::filesystem::path facts = doc["facts"].get<std::string>();
      scenario.facts_file = facts.is_absolute() ? facts : base_dir / facts;
    }
  } catch (const core::Json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("scenario: ") + e.what());
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kInvalidArgument) {
      throw Error(ErrorCode::kParse, e.what());
    }
    throw;
  }
  if (scenario.name.empty()) {
    throw Error(ErrorCode::kParse, "scenario name is empty");
  }
  return scenario;
}

ScriptedScenario ScriptedScenario::LoadFile(
    const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scenario " + path.string());
  core::Json doc;
  try {
    in >> doc;
  } catch (const core::Json::exception &e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return FromJson(doc, path.parent_path());
}

const std::string *ScriptedScenario::Find(const ScriptKey &key) const {
  if (auto it = responses.find(key); it != responses.end()) return &it->second;
  if (key.step == PipelineStep::kReason || key.step == PipelineStep::kRefine) {
    ScriptKey alt = key;
    alt.step = key.step == PipelineStep::kReason ? PipelineStep::kRefine
                                                 : PipelineStep::kReason;
    if (auto it = responses.find(alt); it != responses.end()) {
      return &it->second;
    }
  }
  return nullptr;
}

std::vector<ScriptKey> ScriptedScenario::MissingResponses(
    int max_refinements) const {
  std::vector<ScriptKey> missing;
  const int layers = static_cast<int>(planned_layers.size());
  for (int layer = 0; layer < layers; ++layer) {
    for (int attempt = 1; attempt <= max_refinements + 1; ++attempt) {
      ScriptKey key{attempt == 1 ? PipelineStep::kReason
                                 : PipelineStep::kRefine,
                    layer, attempt};
      if (Find(key) == nullptr) missing.push_back(key);
    }
  }
  ScriptKey integrate{PipelineStep::kIntegrate, 0, 1};
  if (Find(integrate) == nullptr) missing.push_back(integrate);
  return missing;
}

std::string ScriptedBackend::Complete(const BackendRequest &request) {
  const ScriptedScenario &s = *scenario_;
  ScriptKey key{request.step, request.layer, request.attempt};
  if (request.step == PipelineStep::kIntegrate ||
      request.step == PipelineStep::kVanilla ||
      request.step == PipelineStep::kPlan) {
    key.layer = 0;
    key.attempt = 1;
  }
  if (const std::string *text = s.Find(key)) return *text;

  if (request.step == PipelineStep::kPlan && !s.planned_layers.empty()) {
    std::string plan;
    for (const auto &objective : s.planned_layers) {
      plan += "LAYER: " + objective + "\n";
    }
    return plan;
  }
  throw Error(ErrorCode::kBackend, "scripted scenario '" + s.name +
                                       "' has no response for " +
                                       FormatKey(key));
}

ScenarioCatalog::ScenarioCatalog(std::filesystem::path dir)
    : dir_(std::move(dir)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return;
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto &file : files) {
    auto scenario =
        std::make_shared<const ScriptedScenario>(ScriptedScenario::LoadFile(file));
    scenarios_.emplace(scenario->name, scenario);
  }
}

std::vector<std::string> ScenarioCatalog::Names() const {
  std::vector<std::string> names;
  for (const auto &[name, _] : scenarios_) names.push_back(name);
  return names;
}

std::shared_ptr<const ScriptedScenario> ScenarioCatalog::Get(
    const std::string &name) const {
  auto it = scenarios_.find(name);
  if (it == scenarios_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown scenario '" + name + "'");
  }
  return it->second;
}

bool ScenarioCatalog::Contains(const std::string &name) const {
  return scenarios_.count(name) > 0;
}

}  // namespace layercot::agents
