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

// The layered pipeline. A query is split into sub-problems; each layer's
// partial reasoning is generated, verified against the fact store (and a
// reviewer, depending on the verification mode), refined on failure within
// a fixed budget, and only then does the next layer start. Accepted layers
// are finally integrated into one answer.
//
// Layer lifecycle:
//
//   Pending -> Reasoning -> AwaitingVerification -> Accepted
//                  ^                 |      |
//                  |                 |      +--> AwaitingUser --> Accepted
//               annotate             v                 |
//                  |             Refining <---reject---+
//                  +------------------------------------+
//
// Exhausting the refinement budget fails the layer and the session, unless
// on_exhausted = accept_flagged, which accepts the layer with a flag.
//
// Verification modes:
//   automatic    the fact store decides every layer;
//   interactive  every verified layer waits for reviewer feedback;
//   hybrid       contradictions are refined automatically while budget
//                remains; layers whose plan entry lists the user source
//                then wait for feedback, the rest are decided by the store.
//
// All state changes go through Emit, so a session equals the replay of its
// event list.

#ifndef LAYERCOT_CORE_ENGINE_H_
#define LAYERCOT_CORE_ENGINE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "layercot/agents/backend.h"
#include "layercot/agents/prompt.h"
#include "layercot/core/trace.h"
#include "layercot/core/types.h"
#include "layercot/knowledge/fact-store.h"

namespace layercot::core {

enum class StepOutcome { kProgressed, kAwaitingUser, kFinished, kFailed };

std::string_view Name(StepOutcome outcome);

// Parses planner output: one "LAYER: <objective>" line per sub-problem,
// optionally suffixed with " | <source>,<source>". Other lines are ignored.
// The plan is truncated to config.max_layers; with max_layers = 1 the single
// sub-problem is the whole query. Throws Error(kEmptyPlan) when no LAYER
// line is found.
LayerPlan ParsePlan(std::string_view planner_output, const Query &query,
                    const EngineConfig &config, int *proposed = nullptr);

struct VanillaRun {
  FinalAnswer answer;
  Session session;
};

class Engine {
 public:
  Engine(agents::Agents agents,
         std::shared_ptr<const knowledge::FactStore> store,
         Clock clock = SystemClock());

  // Starts a session with a Created event. `scenario` is recorded for
  // callers that need to rebuild the backends on resume. Throws
  // Error(kInvalidArgument) for an empty query or invalid config.
  Session Create(std::string id, Query query, EngineConfig config,
                 std::optional<std::string> scenario = std::nullopt) const;

  // Asks the planner for sub-problems and appends Planned. Throws
  // kPlannerUnavailable when the backend fails and kEmptyPlan when its
  // output has no LAYER line.
  const LayerPlan &PlanLayers(Session &session) const;

  // Runs one step of the current layer:
  //   Reasoning / Refining  generate or refine, verify, then accept, refine,
  //                         hand over to the reviewer, or fail;
  //   AwaitingUser          no change;
  //   all layers accepted   integrate and finish.
  // Throws kNoPlan before planning and kSessionClosed once finished or
  // failed. Backend errors propagate with the session unchanged, so the
  // step can be retried.
  StepOutcome Advance(Session &session) const;

  // Applies reviewer feedback to the layer awaiting it. Throws kWrongLayer
  // when that layer (or attempt) is not awaiting input, kSessionClosed for
  // closed sessions and kInvalidArgument for invalid feedback.
  Session &ApplyFeedback(Session &session, const Feedback &feedback) const;

  // Combines the accepted layers into the final answer. Throws kNotReady
  // until every layer is accepted.
  FinalAnswer Integrate(Session &session) const;

  // Plans if needed, then advances until the session finishes, fails or
  // waits for feedback.
  StepOutcome Run(Session &session) const;

  // Single unverified reasoning pass: one backend call, no verdicts.
  VanillaRun RunVanilla(std::string id, Query query,
                        EngineConfig config = {}) const;

  const agents::Agents &agents() const { return agents_; }
  const knowledge::FactStore &store() const { return *store_; }

 private:
  agents::PromptContext ContextFor(const Session &session,
                                   std::optional<int> layer) const;
  StepOutcome VerifyLayer(Session &session, int layer) const;

  agents::Agents agents_;
  std::shared_ptr<const knowledge::FactStore> store_;
  Clock clock_;
};

}  // namespace layercot::core

#endif  // LAYERCOT_CORE_ENGINE_H_
