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

// Deterministic fixture-driven backend. A scenario file is JSON:
//
//   {
//     "name": "medical",
//     "query": "...",                 (optional default query)
//     "domain_tag": "medical",        (optional)
//     "layers": ["objective", ...],
//     "responses": [{"step": "reason", "layer": 0, "attempt": 1,
//                    "text": "..."}, ...],
//     "facts": "medical.facts"        (relative to the scenario file)
//   }
//
// Steps are plan, reason, refine, integrate and vanilla. layer and attempt
// default to 0 and 1. Without a plan response the backend answers the plan
// step with one "LAYER:" line per entry of "layers". A layer entry may carry
// verification sources as "objective | knowledge,user".

#ifndef LAYERCOT_AGENTS_SCRIPTED_BACKEND_H_
#define LAYERCOT_AGENTS_SCRIPTED_BACKEND_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "layercot/agents/backend.h"
#include "layercot/core/types.h"

namespace layercot::agents {

struct ScriptKey {
  PipelineStep step = PipelineStep::kReason;
  int layer = 0;
  int attempt = 1;

  auto operator<=>(const ScriptKey &other) const = default;
};

std::string FormatKey(const ScriptKey &key);

struct ScriptedScenario {
  std::string name;
  std::optional<std::string> query;
  std::string domain_tag;
  std::vector<std::string> planned_layers;
  std::map<ScriptKey, std::string> responses;
  // Resolved path of the companion fact file; empty when none.
  std::filesystem::path facts_file;

  // Throws Error(kParse) for malformed documents.
  static ScriptedScenario FromJson(const core::Json &doc,
                                   const std::filesystem::path &base_dir);
  static ScriptedScenario LoadFile(const std::filesystem::path &path);

  // Response for a key. reason and refine entries stand in for each other
  // at the same (layer, attempt), since a regenerated layer may be asked
  // for either.
  const std::string *Find(const ScriptKey &key) const;

  // Keys reachable within `max_refinements` retries that have no response.
  std::vector<ScriptKey> MissingResponses(int max_refinements) const;
};

class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::shared_ptr<const ScriptedScenario> scenario)
      : scenario_(std::move(scenario)) {}

  std::string Complete(const BackendRequest &request) override;
  std::string name() const override { return "scripted:" + scenario_->name; }

  const ScriptedScenario &scenario() const { return *scenario_; }

 private:
  std::shared_ptr<const ScriptedScenario> scenario_;
};

// Scenario files (*.json) found in a directory, keyed by scenario name.
class ScenarioCatalog {
 public:
  explicit ScenarioCatalog(std::filesystem::path dir);

  std::vector<std::string> Names() const;
  // Throws Error(kNotFound) for unknown names.
  std::shared_ptr<const ScriptedScenario> Get(const std::string &name) const;
  bool Contains(const std::string &name) const;

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::shared_ptr<const ScriptedScenario>> scenarios_;
};

}  // namespace layercot::agents

#endif  // LAYERCOT_AGENTS_SCRIPTED_BACKEND_H_
