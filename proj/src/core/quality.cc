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

#include "layercot/core/quality.h"

#include <map>
#include <vector>

namespace layercot::core {
namespace {

// One emitted partial and what happened to its claims.
struct Generation {
  std::vector<std::string> claim_ids;
  std::vector<ClaimStatus> statuses;
  bool approved = false;
};

}  // namespace

double Quality(std::span<const TraceEvent> events) {
  std::vector<Generation> generations;
  std::map<int, size_t> latest;  // layer -> index into generations
  size_t loose_claims = 0;       // claims outside any layer (vanilla)

  for (const auto &event : events) {
    switch (event.kind) {
      case EventKind::kPartialGenerated:
      case EventKind::kRefined: {
        const Json &partial = event.payload.at("partial");
        Generation gen;
        for (const auto &claim : partial.at("claims")) {
          gen.claim_ids.push_back(claim.at("id").get<std::string>());
        }
        latest[partial.at("layer").get<int>()] = generations.size();
        generations.push_back(std::move(gen));
        break;
      }
      case EventKind::kVerdictRecorded: {
        auto verdict = event.payload.at("verdict").get<VerificationVerdict>();
        auto it = latest.find(verdict.layer_index);
        if (it == latest.end()) break;
        Generation &gen = generations[it->second];
        gen.statuses.clear();
        for (const auto &id : gen.claim_ids) {
          gen.statuses.push_back(verdict.StatusOf(id).value_or(ClaimStatus::kUnknown));
        }
        break;
      }
      case EventKind::kFeedbackReceived: {
        const Json &feedback = event.payload.at("feedback");
        if (feedback.at("action") != "approve") break;
        auto it = latest.find(feedback.at("layer").get<int>());
        if (it != latest.end()) generations[it->second].approved = true;
        break;
      }
      case EventKind::kIntegrated:
        if (event.payload.contains("claims")) {
          loose_claims += event.payload["claims"].size();
        }
        break;
      default:
        break;
    }
  }

  size_t total = loose_claims;
  size_t verified = 0;
  for (const auto &gen : generations) {
    total += gen.claim_ids.size();
    if (gen.approved) {
      verified += gen.claim_ids.size();
      continue;
    }
    for (auto status : gen.statuses) {
      if (status == ClaimStatus::kSupported) ++verified;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(verified) / total;
}

}  // namespace layercot::core
