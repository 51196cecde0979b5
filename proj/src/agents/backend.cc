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

#include "layercot/agents/backend.h"

#include "layercot/core/error.h"

namespace layercot::agents {

std::string_view Name(RoleKind role) {
  switch (role) {
    case RoleKind::kPlanner: return "planner";
    case RoleKind::kReasoner: return "reasoner";
    case RoleKind::kVerifier: return "verifier";
    case RoleKind::kRetriever: return "retriever";
    case RoleKind::kUserProxy: return "user_proxy";
  }
  return "?";
}

RoleKind RoleFor(PipelineStep step) {
  return step == PipelineStep::kPlan ? RoleKind::kPlanner
                                     : RoleKind::kReasoner;
}

std::string FailingBackend::Complete(const BackendRequest &request) {
  throw Error(ErrorCode::kBackend, reason_ + " (" +
                                       std::string(Name(request.step)) +
                                       ", layer " +
                                       std::to_string(request.layer) + ")");
}

std::string RecordingBackend::Complete(const BackendRequest &request) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    requests_.push_back(request);
  }
  return inner_->Complete(request);
}

std::vector<BackendRequest> RecordingBackend::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_;
}

size_t RecordingBackend::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_.size();
}

Backend &Agents::For(RoleKind role) const {
  const std::shared_ptr<Backend> *handle = nullptr;
  if (role == RoleKind::kPlanner) handle = &planner;
  if (role == RoleKind::kReasoner) handle = &reasoner;
  if (handle == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "role " + std::string(Name(role)) + " has no backend handle");
  }
  if (!*handle) {
    throw Error(ErrorCode::kBackend,
                "no backend configured for role " + std::string(Name(role)));
  }
  return **handle;
}

}  // namespace layercot::agents
