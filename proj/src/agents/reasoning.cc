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

#include "layercot/agents/reasoning.h"

#include "layercot/agents/claim-parser.h"
#include "layercot/core/error.h"
#include "layercot/core/strings.h"

namespace layercot::agents {

std::string CallBackend(Backend &backend, BackendRequest request) {
  std::string reply;
  try {
    reply = backend.Complete(request);
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw Error(ErrorCode::kBackend,
                backend.name() + " failed: " + std::string(e.what()));
  }
  if (Trim(reply).empty()) {
    throw Error(ErrorCode::kEmptyResponse,
                backend.name() + " returned an empty " +
                    std::string(Name(request.step)) + " response");
  }
  return reply;
}

core::PartialReasoning GeneratePartial(const core::SubProblem &sub_problem,
                                       const PromptContext &context,
                                       Backend &backend,
                                       const PromptTemplate &tmpl,
                                       int attempt) {
  BackendRequest request;
  request.role = RoleKind::kReasoner;
  request.step = tmpl.step;
  request.layer = sub_problem.index;
  request.attempt = attempt;
  request.prompt = RenderPrompt(tmpl, context);

  core::PartialReasoning partial;
  partial.layer_index = sub_problem.index;
  partial.attempt = attempt;
  partial.narrative = CallBackend(backend, std::move(request));
  ClaimParse parsed = ParseClaims(partial.narrative);
  partial.claims = std::move(parsed.claims);
  partial.warnings = std::move(parsed.warnings);
  return partial;
}

std::string DescribeContradictions(const core::PartialReasoning &previous,
                                   const core::VerificationVerdict &verdict) {
  std::string out;
  for (const auto &claim : previous.claims) {
    if (verdict.StatusOf(claim.id) != core::ClaimStatus::kContradicted) {
      continue;
    }
    std::string evidence;
    for (const auto &e : verdict.evidence) {
      if (e.claim_id == claim.id) evidence = e.text;
    }
    if (!out.empty()) out += "\n";
    out += "- " + claim.statement + " (contradicted; " + evidence + ")";
  }
  return out;
}

core::PartialReasoning RefinePartial(
    const core::PartialReasoning &previous,
    const core::VerificationVerdict &verdict,
    const std::optional<std::string> &rejection_note,
    const std::string &objective, PromptContext context, Backend &backend,
    const PromptTemplate &tmpl, int max_refinements) {
  if (previous.attempt > max_refinements) {
    throw Error(ErrorCode::kBudgetExhausted,
                "layer " + std::to_string(previous.layer_index) +
                    " used all " + std::to_string(max_refinements) +
                    " refinements");
  }
  context.objective = objective;
  context.previous = previous.narrative;
  context.contradictions = DescribeContradictions(previous, verdict);
  context.rejection_note = rejection_note.value_or("");

  core::SubProblem sub_problem;
  sub_problem.index = previous.layer_index;
  sub_problem.objective = objective;
  return GeneratePartial(sub_problem, context, backend, tmpl,
                         previous.attempt + 1);
}

}  // namespace layercot::agents
