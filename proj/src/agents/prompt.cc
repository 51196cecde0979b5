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

#include "layercot/agents/prompt.h"

#include "layercot/core/error.h"

namespace layercot::agents {
namespace {

constexpr std::string_view kPlanBody =
    R"(You are the planning agent of a layered reasoning pipeline.
Split the question below into at most {max_layers} ordered sub-problems.
Each sub-problem must be checkable on its own before the next one starts.

Question: {query}
Constraints:
{constraints}

Write one line per sub-problem, in order, as "LAYER: <objective>".
A line may end with " | <sources>" where sources is a comma-separated
subset of knowledge, user, none naming who must verify that layer.)";

constexpr std::string_view kReasonBody =
    R"(You are the reasoning agent for one layer of a layered reasoning pipeline.

Question: {query}
Constraints:
{constraints}

Verified conclusions from earlier layers:
{prior_layers}

Current sub-problem: {objective}

Reason only about the current sub-problem. Put every checkable fact on its
own line as "CLAIM: <subject> | <predicate> | <object>".)";

constexpr std::string_view kRefineBody =
    R"(You are the reasoning agent for one layer of a layered reasoning pipeline.
Your previous attempt at this layer did not pass verification.

Question: {query}
Constraints:
{constraints}

Verified conclusions from earlier layers:
{prior_layers}

Current sub-problem: {objective}

Previous attempt:
{previous}

Problems found by verification:
{contradictions}

Reviewer note: {rejection_note}

Rewrite the reasoning for this sub-problem so that it is consistent with the
evidence above. Put every checkable fact on its own line as
"CLAIM: <subject> | <predicate> | <object>".)";

constexpr std::string_view kIntegrateBody =
    R"(You are the integration agent of a layered reasoning pipeline.

Question: {query}
Constraints:
{constraints}

Verified layer conclusions:
{prior_layers}

Combine the verified conclusions into one final answer to the question. Do
not introduce facts that the layers did not establish.)";

constexpr std::string_view kVanillaBody =
    R"(Question: {query}
Constraints:
{constraints}

Think step by step, then state the final answer.)";

bool IsPlaceholderChar(char c) {
  return (c >= 'a' && c <= 'z') || c == '_' || (c >= '0' && c <= '9');
}

}  // namespace

std::string_view Name(PipelineStep step) {
  switch (step) {
    case PipelineStep::kPlan: return "plan";
    case PipelineStep::kReason: return "reason";
    case PipelineStep::kRefine: return "refine";
    case PipelineStep::kIntegrate: return "integrate";
    case PipelineStep::kVanilla: return "vanilla";
  }
  return "?";
}

PipelineStep ParsePipelineStep(std::string_view name) {
  for (auto step : {PipelineStep::kPlan, PipelineStep::kReason,
                    PipelineStep::kRefine, PipelineStep::kIntegrate,
                    PipelineStep::kVanilla}) {
    if (Name(step) == name) return step;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown pipeline step '" + std::string(name) + "'");
}

std::map<std::string, std::string, std::less<>> PromptContext::Bindings()
    const {
  std::map<std::string, std::string, std::less<>> bindings;
  bindings["query"] = query;

  std::string constraint_text;
  for (const auto &c : constraints) {
    if (!constraint_text.empty()) constraint_text += "\n";
    constraint_text += "- " + c;
  }
  bindings["constraints"] = constraint_text;

  std::string prior;
  for (const auto &layer : prior_layers) {
    if (!prior.empty()) prior += "\n\n";
    prior += "Layer " + std::to_string(layer.index + 1) + " (" +
             layer.objective + "):\n" + layer.narrative;
  }
  bindings["prior_layers"] = prior;

  if (objective) bindings["objective"] = *objective;
  if (rejection_note) bindings["rejection_note"] = *rejection_note;
  if (previous) bindings["previous"] = *previous;
  if (contradictions) bindings["contradictions"] = *contradictions;
  if (max_layers) bindings["max_layers"] = std::to_string(*max_layers);
  return bindings;
}

std::string RenderPrompt(const PromptTemplate &tmpl,
                         const PromptContext &context) {
  const auto bindings = context.Bindings();
  const std::string &body = tmpl.body;
  std::string out;
  out.reserve(body.size());
  size_t i = 0;
  while (i < body.size()) {
    if (body[i] == '{') {
      size_t j = i + 1;
      while (j < body.size() && IsPlaceholderChar(body[j])) ++j;
      if (j < body.size() && body[j] == '}' && j > i + 1) {
        std::string_view name(body.data() + i + 1, j - i - 1);
        auto it = bindings.find(name);
        if (it == bindings.end()) {
          throw Error(ErrorCode::kUnboundPlaceholder,
                      "placeholder {" + std::string(name) + "} in " +
                          std::string(Name(tmpl.step)) +
                          " template is not bound");
        }
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out.push_back(body[i]);
    ++i;
  }
  return out;
}

const PromptTemplate &DefaultTemplate(PipelineStep step) {
  static const std::array<PromptTemplate, 5> kDefaults{{
      {PipelineStep::kPlan, std::string(kPlanBody)},
      {PipelineStep::kReason, std::string(kReasonBody)},
      {PipelineStep::kRefine, std::string(kRefineBody)},
      {PipelineStep::kIntegrate, std::string(kIntegrateBody)},
      {PipelineStep::kVanilla, std::string(kVanillaBody)},
  }};
  return kDefaults[static_cast<size_t>(step)];
}

PromptSet::PromptSet() {
  for (size_t i = 0; i < templates_.size(); ++i) {
    templates_[i] = DefaultTemplate(static_cast<PipelineStep>(i));
  }
}

}  // namespace layercot::agents
