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

#include "layercot/knowledge/verifier.h"

namespace layercot::knowledge {

using core::Aggregate;
using core::ClaimStatus;

Aggregate DecideAggregate(bool any_contradicted, bool budget_remains,
                          bool approved) {
  if (!any_contradicted && approved) return Aggregate::kAccepted;
  if (any_contradicted && budget_remains) return Aggregate::kNeedsRefinement;
  return Aggregate::kRejected;
}

core::VerificationVerdict VerifyPartial(const FactStore &store,
                                        const core::PartialReasoning &partial,
                                        const core::EngineConfig &config) {
  core::VerificationVerdict verdict;
  verdict.layer_index = partial.layer_index;
  verdict.attempt = partial.attempt;
  verdict.source = core::VerdictSource::kKnowledge;

  for (const auto &claim : partial.claims) {
    Match match;
    if (claim.assertion) match = store.Find(*claim.assertion);
    verdict.per_claim.push_back({claim.id, match.status});

    std::string evidence;
    if (!match.fact) {
      evidence = kNoMatchingFact;
    } else if (match.status == ClaimStatus::kContradicted &&
               match.fact->polarity) {
      evidence = "functional conflict: " + FormatFact(*match.fact);
    } else {
      evidence = "fact: " + FormatFact(*match.fact);
    }
    verdict.evidence.push_back({claim.id, std::move(evidence)});
  }

  verdict.aggregate =
      DecideAggregate(verdict.HasContradiction(),
                      BudgetRemains(partial.attempt, config), /*approved=*/true);
  return verdict;
}

}  // namespace layercot::knowledge
