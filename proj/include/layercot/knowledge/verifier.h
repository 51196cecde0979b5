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

#ifndef LAYERCOT_KNOWLEDGE_VERIFIER_H_
#define LAYERCOT_KNOWLEDGE_VERIFIER_H_

#include "layercot/core/types.h"
#include "layercot/knowledge/fact-store.h"

namespace layercot::knowledge {

inline constexpr char kNoMatchingFact[] = "no matching fact";

// Layer decision rule:
//   Accepted         no contradicted claim, and the layer is approved;
//   NeedsRefinement  at least one contradicted claim and budget remains;
//   Rejected         otherwise.
core::Aggregate DecideAggregate(bool any_contradicted, bool budget_remains,
                                bool approved);

// True while the attempt may still be refined under the configured budget.
inline bool BudgetRemains(int attempt, const core::EngineConfig &config) {
  return attempt <= config.max_refinements;
}

// Checks every claim of a partial against the store. Claims without a
// structured assertion are Unknown. Unknown claims never block acceptance.
// The aggregate is what the store alone decides; layers that also need a
// reviewer are gated by the engine.
core::VerificationVerdict VerifyPartial(const FactStore &store,
                                        const core::PartialReasoning &partial,
                                        const core::EngineConfig &config);

}  // namespace layercot::knowledge

#endif  // LAYERCOT_KNOWLEDGE_VERIFIER_H_
