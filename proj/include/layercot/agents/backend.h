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

#ifndef LAYERCOT_AGENTS_BACKEND_H_
#define LAYERCOT_AGENTS_BACKEND_H_

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "layercot/agents/prompt.h"

namespace layercot::agents {

enum class RoleKind { kPlanner, kReasoner, kVerifier, kRetriever, kUserProxy };

std::string_view Name(RoleKind role);

// Role of the agent that serves each pipeline step.
RoleKind RoleFor(PipelineStep step);

struct BackendRequest {
  RoleKind role = RoleKind::kReasoner;
  PipelineStep step = PipelineStep::kReason;
  int layer = 0;
  int attempt = 1;
  std::string prompt;
};

// A text-completion agent. Implementations must be safe to call from
// several sessions at once and keep no state between calls. Failures throw
// Error(kBackend).
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string Complete(const BackendRequest &request) = 0;
  virtual std::string name() const = 0;
};

// Returns the prompt unchanged.
class EchoBackend : public Backend {
 public:
  std::string Complete(const BackendRequest &request) override {
    return request.prompt;
  }
  std::string name() const override { return "echo"; }
};

// Fails every call. Stands in for an unreachable or empty backend.
class FailingBackend : public Backend {
 public:
  explicit FailingBackend(std::string reason = "backend has no responses")
      : reason_(std::move(reason)) {}

  std::string Complete(const BackendRequest &request) override;
  std::string name() const override { return "failing"; }

 private:
  std::string reason_;
};

// Forwards to another backend and keeps a copy of every request.
class RecordingBackend : public Backend {
 public:
  explicit RecordingBackend(std::shared_ptr<Backend> inner)
      : inner_(std::move(inner)) {}

  std::string Complete(const BackendRequest &request) override;
  std::string name() const override { return inner_->name(); }

  std::vector<BackendRequest> requests() const;
  size_t calls() const;

 private:
  std::shared_ptr<Backend> inner_;
  mutable std::mutex mu_;
  std::vector<BackendRequest> requests_;
};

// Backend handles for the roles that issue completions. A single backend
// may serve both roles.
struct Agents {
  std::shared_ptr<Backend> planner;
  std::shared_ptr<Backend> reasoner;
  PromptSet prompts;

  static Agents Single(std::shared_ptr<Backend> backend) {
    return Agents{backend, backend, PromptSet()};
  }

  // Throws Error(kInvalidArgument) for roles that have no backend handle
  // (verification runs against the fact store, user input through feedback).
  Backend &For(RoleKind role) const;
};

}  // namespace layercot::agents

#endif  // LAYERCOT_AGENTS_BACKEND_H_
