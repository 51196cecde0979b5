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

#ifndef LAYERCOT_AGENTS_PROMPT_H_
#define LAYERCOT_AGENTS_PROMPT_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace layercot::agents {

// Pipeline steps that issue a backend call.
enum class PipelineStep { kPlan, kReason, kRefine, kIntegrate, kVanilla };

std::string_view Name(PipelineStep step);
PipelineStep ParsePipelineStep(std::string_view name);

// Template text with {name} placeholders. Recognized names are query,
// constraints, objective, prior_layers, rejection_note, previous,
// contradictions and max_layers. Braces not enclosing a lowercase
// identifier are copied through.
struct PromptTemplate {
  PipelineStep step = PipelineStep::kReason;
  std::string body;
};

struct PriorLayer {
  int index = 0;
  std::string objective;
  std::string narrative;
};

// What a prompt may see of a session. Optional members bind their
// placeholder only when set; query, constraints and prior_layers always
// bind (empty lists render as empty strings).
struct PromptContext {
  std::string query;
  std::vector<std::string> constraints;
  std::vector<PriorLayer> prior_layers;
  std::optional<std::string> objective;
  std::optional<std::string> rejection_note;
  std::optional<std::string> previous;
  std::optional<std::string> contradictions;
  std::optional<int> max_layers;

  std::map<std::string, std::string, std::less<>> Bindings() const;
};

// Substitutes every placeholder in one pass; bound values are not
// re-expanded. Throws Error(kUnboundPlaceholder) naming the first
// placeholder the context cannot bind.
std::string RenderPrompt(const PromptTemplate &tmpl,
                         const PromptContext &context);

const PromptTemplate &DefaultTemplate(PipelineStep step);

// One template per step, defaulting to the built-in set.
class PromptSet {
 public:
  PromptSet();

  const PromptTemplate &For(PipelineStep step) const {
    return templates_[static_cast<size_t>(step)];
  }
  void Set(PromptTemplate tmpl) {
    templates_[static_cast<size_t>(tmpl.step)] = std::move(tmpl);
  }

 private:
  std::array<PromptTemplate, 5> templates_;
};

}  // namespace layercot::agents

#endif  // LAYERCOT_AGENTS_PROMPT_H_
