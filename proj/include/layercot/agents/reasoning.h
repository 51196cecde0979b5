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

// Reasoning-agent calls: one layer's partial chain of thought and its
// refinement after a failed verification or a reviewer's rejection.

#ifndef LAYERCOT_AGENTS_REASONING_H_
#define LAYERCOT_AGENTS_REASONING_H_

#include <optional>
#include <string>

#include "layercot/agents/backend.h"
#include "layercot/agents/prompt.h"
#include "layercot/core/types.h"

namespace layercot::agents {

// Issues one backend call and wraps any non-library exception as
// Error(kBackend). Whitespace-only replies raise Error(kEmptyResponse).
std::string CallBackend(Backend &backend, BackendRequest request);

// Prompts for the sub-problem and parses claims from the reply. `context`
// must carry the objective.
core::PartialReasoning GeneratePartial(const core::SubProblem &sub_problem,
                                       const PromptContext &context,
                                       Backend &backend,
                                       const PromptTemplate &tmpl,
                                       int attempt = 1);

// Lists contradicted claims with their evidence, one per line.
std::string DescribeContradictions(const core::PartialReasoning &previous,
                                   const core::VerificationVerdict &verdict);

// Produces attempt previous.attempt + 1. The prompt carries the previous
// narrative, the contradicted claims with evidence and the rejection note.
// Throws Error(kBudgetExhausted) once previous.attempt > max_refinements.
core::PartialReasoning RefinePartial(
    const core::PartialReasoning &previous,
    const core::VerificationVerdict &verdict,
    const std::optional<std::string> &rejection_note,
    const std::string &objective, PromptContext context, Backend &backend,
    const PromptTemplate &tmpl, int max_refinements);

}  // namespace layercot::agents

#endif  // LAYERCOT_AGENTS_REASONING_H_
