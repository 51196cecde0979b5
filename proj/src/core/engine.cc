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

#include "layercot/core/engine.h"

#include "fmt/format.h"
#include "layercot/agents/claim-parser.h"
#include "layercot/agents/reasoning.h"
#include "layercot/core/error.h"
#include "layercot/core/quality.h"
#include "layercot/core/strings.h"
#include "layercot/knowledge/verifier.h"

namespace layercot::core {

using agents::PipelineStep;
using agents::RoleKind;

namespace {

constexpr std::string_view kLayerPrefix = "LAYER:";

// Parses "knowledge, user" into sources; nullopt when any name is unknown.
std::optional<std::vector<SourceKind>> ParseSources(std::string_view text) {
  std::vector<SourceKind> sources;
  for (std::string_view name : SplitAndTrim(text, ',')) {
    if (name == "knowledge") {
      sources.push_back(SourceKind::kKnowledge);
    } else if (name == "user") {
      sources.push_back(SourceKind::kUser);
    } else if (name == "none") {
      sources.push_back(SourceKind::kNone);
    } else {
      return std::nullopt;
    }
  }
  return sources;
}

bool RoutesToUser(VerificationMode mode, const SubProblem &sub,
                  bool contradicted, bool budget_remains) {
  switch (mode) {
    case VerificationMode::kAutomatic:
      return false;
    case VerificationMode::kInteractive:
      return true;
    case VerificationMode::kHybrid:
      return sub.Requires(SourceKind::kUser) &&
             !(contradicted && budget_remains);
  }
  return false;
}

void CheckOpen(const Session &session) {
  if (session.Closed()) {
    throw Error(ErrorCode::kSessionClosed,
                "session " + session.id + " is " +
                    std::string(Name(session.Status())));
  }
}

}  // namespace

std::string_view Name(StepOutcome outcome) {
  switch (outcome) {
    case StepOutcome::kProgressed: return "Progressed";
    case StepOutcome::kAwaitingUser: return "AwaitingUser";
    case StepOutcome::kFinished: return "Finished";
    case StepOutcome::kFailed: return "Failed";
  }
  return "?";
}

LayerPlan ParsePlan(std::string_view planner_output, const Query &query,
                    const EngineConfig &config, int *proposed) {
  LayerPlan plan;
  for (std::string_view raw : SplitLines(planner_output)) {
    std::string_view line = Trim(raw);
    if (!line.starts_with(kLayerPrefix)) continue;
    std::string_view body = Trim(line.substr(kLayerPrefix.size()));

    SubProblem sub;
    sub.verification_sources = {SourceKind::kKnowledge};
    if (auto bar = body.rfind('|'); bar != std::string_view::npos) {
      if (auto sources = ParseSources(body.substr(bar + 1))) {
        sub.verification_sources = std::move(*sources);
        body = Trim(body.substr(0, bar));
      }
    }
    if (body.empty()) continue;
    sub.objective = std::string(body);
    sub.index = plan.size();
    plan.sub_problems.push_back(std::move(sub));
  }
  if (proposed != nullptr) *proposed = plan.size();
  if (plan.sub_problems.empty()) {
    throw Error(ErrorCode::kEmptyPlan, "planner produced no LAYER lines");
  }
  if (plan.size() > config.max_layers) {
    plan.sub_problems.resize(config.max_layers);
  }
  if (config.max_layers == 1) {
    plan.sub_problems.front().objective = query.text;
  }
  return plan;
}

Engine::Engine(agents::Agents agents,
               std::shared_ptr<const knowledge::FactStore> store, Clock clock)
    : agents_(std::move(agents)),
      store_(store ? std::move(store)
                   : std::make_shared<const knowledge::FactStore>()),
      clock_(std::move(clock)) {}

Session Engine::Create(std::string id, Query query, EngineConfig config,
                       std::optional<std::string> scenario) const {
  if (Trim(query.text).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "query text is empty");
  }
  config.Validate();
  if (query.id.empty()) query.id = id;

  Json payload{{"session_id", id},
               {"query", query},
               {"config", config},
               {"pipeline", Name(PipelineKind::kLayered)}};
  if (scenario) payload["scenario"] = *scenario;

  Session session;
  Emit(session, EventKind::kCreated, std::move(payload), clock_);
  return session;
}

agents::PromptContext Engine::ContextFor(const Session &session,
                                         std::optional<int> layer) const {
  agents::PromptContext ctx;
  ctx.query = session.query.text;
  ctx.constraints = session.query.constraints;
  ctx.max_layers = session.config.max_layers;
  if (!session.plan) return ctx;

  const int limit = layer ? *layer : session.plan->size();
  for (int i = 0; i < limit; ++i) {
    const LayerRecord &record = session.layers[i];
    if (record.state != LayerState::kAccepted || !record.partial) continue;
    ctx.prior_layers.push_back(
        {i, session.plan->sub_problems[i].objective, record.partial->narrative});
  }
  if (layer) ctx.objective = session.plan->sub_problems[*layer].objective;
  return ctx;
}

const LayerPlan &Engine::PlanLayers(Session &session) const {
  CheckOpen(session);
  if (session.pipeline != PipelineKind::kLayered) {
    throw Error(ErrorCode::kInvalidArgument, "vanilla sessions have no plan");
  }
  if (session.plan) {
    throw Error(ErrorCode::kInvalidArgument,
                "session " + session.id + " is already planned");
  }

  agents::Backend &planner = agents_.For(RoleKind::kPlanner);
  agents::BackendRequest request;
  request.role = RoleKind::kPlanner;
  request.step = PipelineStep::kPlan;
  request.prompt = agents::RenderPrompt(
      agents_.prompts.For(PipelineStep::kPlan), ContextFor(session, {}));

  std::string output;
  try {
    output = agents::CallBackend(planner, std::move(request));
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kBackend ||
        e.code() == ErrorCode::kEmptyResponse) {
      throw Error(ErrorCode::kPlannerUnavailable, e.what());
    }
    throw;
  }

  int proposed = 0;
  LayerPlan plan = ParsePlan(output, session.query, session.config, &proposed);
  Emit(session, EventKind::kPlanned,
       Json{{"plan", plan}, {"proposed", proposed}, {"backend", planner.name()}},
       clock_);
  return *session.plan;
}

StepOutcome Engine::Advance(Session &session) const {
  CheckOpen(session);
  if (session.pipeline != PipelineKind::kLayered) {
    throw Error(ErrorCode::kSessionClosed, "vanilla sessions do not advance");
  }
  if (!session.plan) {
    throw Error(ErrorCode::kNoPlan, "session " + session.id + " has no plan");
  }

  auto current = session.CurrentLayer();
  if (!current) {
    Integrate(session);
    return StepOutcome::kFinished;
  }
  const int layer = *current;
  const LayerRecord &record = session.layers[layer];
  const SubProblem &sub = session.plan->sub_problems[layer];
  agents::Backend &reasoner = agents_.For(RoleKind::kReasoner);

  switch (record.state) {
    case LayerState::kAwaitingUser:
      return StepOutcome::kAwaitingUser;

    case LayerState::kPending:
    case LayerState::kReasoning: {
      auto partial = agents::GeneratePartial(
          sub, ContextFor(session, layer), reasoner,
          agents_.prompts.For(PipelineStep::kReason),
          std::max(record.attempt, 1));
      Emit(session, EventKind::kPartialGenerated,
           Json{{"partial", partial}, {"backend", reasoner.name()}}, clock_);
      return VerifyLayer(session, layer);
    }

    case LayerState::kRefining: {
      VerificationVerdict verdict =
          record.verdict.value_or(VerificationVerdict{});
      auto partial = agents::RefinePartial(
          *record.partial, verdict, record.rejection_note, sub.objective,
          ContextFor(session, layer), reasoner,
          agents_.prompts.For(PipelineStep::kRefine),
          session.config.max_refinements);
      Json addressed = Json::array();
      for (const auto &c : verdict.per_claim) {
        if (c.status == ClaimStatus::kContradicted) addressed.push_back(c.claim_id);
      }
      Json note = record.rejection_note ? Json(*record.rejection_note)
                                        : Json(nullptr);
      Emit(session, EventKind::kRefined,
           Json{{"partial", partial},
                {"rejection_note", note},
                {"addressed", addressed},
                {"backend", reasoner.name()}},
           clock_);
      return VerifyLayer(session, layer);
    }

    case LayerState::kAwaitingVerification:
      // A partial was logged but not yet verified.
      return VerifyLayer(session, layer);

    case LayerState::kAccepted:
    case LayerState::kFailed:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("layer {} cannot advance from {}", layer,
                          Name(record.state)));
}

StepOutcome Engine::VerifyLayer(Session &session, int layer) const {
  const LayerRecord &record = session.layers[layer];
  const SubProblem &sub = session.plan->sub_problems[layer];
  const EngineConfig &config = session.config;

  VerificationVerdict verdict =
      knowledge::VerifyPartial(*store_, *record.partial, config);
  const bool contradicted = verdict.HasContradiction();
  const bool budget = knowledge::BudgetRemains(record.attempt, config);
  const bool await_user =
      RoutesToUser(config.verification_mode, sub, contradicted, budget);
  const Aggregate aggregate = verdict.aggregate;

  Emit(session, EventKind::kVerdictRecorded,
       Json{{"verdict", verdict}, {"await_user", await_user}}, clock_);
  if (await_user) return StepOutcome::kAwaitingUser;

  switch (aggregate) {
    case Aggregate::kAccepted:
      Emit(session, EventKind::kLayerAccepted,
           Json{{"layer", layer},
                {"source", Name(VerdictSource::kKnowledge)},
                {"flagged", false}},
           clock_);
      return StepOutcome::kProgressed;
    case Aggregate::kNeedsRefinement:
      return StepOutcome::kProgressed;
    case Aggregate::kRejected:
      break;
  }

  if (config.on_exhausted == OnExhausted::kAcceptFlagged) {
    Emit(session, EventKind::kLayerAccepted,
         Json{{"layer", layer},
              {"source", Name(VerdictSource::kKnowledge)},
              {"flagged", true}},
         clock_);
    return StepOutcome::kProgressed;
  }
  Emit(session, EventKind::kLayerFailed,
       Json{{"layer", layer},
            {"reason", fmt::format("contradiction persists after {} "
                                   "refinement(s)",
                                   config.max_refinements)}},
       clock_);
  return StepOutcome::kFailed;
}

Session &Engine::ApplyFeedback(Session &session,
                               const Feedback &feedback) const {
  CheckOpen(session);
  if (session.pipeline != PipelineKind::kLayered) {
    throw Error(ErrorCode::kSessionClosed, "vanilla sessions take no feedback");
  }
  feedback.Validate();
  if (!feedback.session_id.empty() && feedback.session_id != session.id) {
    throw Error(ErrorCode::kInvalidArgument,
                "feedback addressed to session " + feedback.session_id);
  }
  auto awaiting = session.AwaitingLayer();
  if (!awaiting || *awaiting != feedback.layer_index) {
    throw Error(ErrorCode::kWrongLayer,
                fmt::format("layer {} is not awaiting feedback",
                            feedback.layer_index));
  }
  const LayerRecord &record = session.layers[*awaiting];
  if (feedback.attempt && *feedback.attempt != record.attempt) {
    throw Error(ErrorCode::kWrongLayer,
                fmt::format("layer {} is at attempt {}, not {}",
                            feedback.layer_index, record.attempt,
                            *feedback.attempt));
  }

  Feedback recorded = feedback;
  recorded.session_id = session.id;
  Emit(session, EventKind::kFeedbackReceived, Json{{"feedback", recorded}},
       clock_);

  const int layer = feedback.layer_index;
  switch (feedback.action) {
    case FeedbackAction::kApprove:
      Emit(session, EventKind::kLayerAccepted,
           Json{{"layer", layer},
                {"source", Name(VerdictSource::kUser)},
                {"flagged", false}},
           clock_);
      break;
    case FeedbackAction::kReject:
      if (session.layers[layer].state != LayerState::kRefining) {
        Emit(session, EventKind::kLayerFailed,
             Json{{"layer", layer},
                  {"reason", "rejected by reviewer with no refinements left"}},
             clock_);
      }
      break;
    case FeedbackAction::kAnnotate:
      break;
  }
  return session;
}

FinalAnswer Engine::Integrate(Session &session) const {
  CheckOpen(session);
  if (session.pipeline != PipelineKind::kLayered) {
    throw Error(ErrorCode::kSessionClosed, "vanilla sessions are integrated");
  }
  if (!session.plan || session.CurrentLayer()) {
    throw Error(ErrorCode::kNotReady, "not every layer is accepted");
  }

  agents::Backend &reasoner = agents_.For(RoleKind::kReasoner);
  agents::BackendRequest request;
  request.role = RoleKind::kReasoner;
  request.step = PipelineStep::kIntegrate;
  request.prompt = agents::RenderPrompt(
      agents_.prompts.For(PipelineStep::kIntegrate), ContextFor(session, {}));

  FinalAnswer answer;
  answer.text = agents::CallBackend(reasoner, std::move(request));
  for (int i = 0; i < session.plan->size(); ++i) {
    if (!session.layers[i].flagged) answer.supporting_layers.push_back(i);
  }
  answer.quality = Quality(session.events);
  Emit(session, EventKind::kIntegrated,
       Json{{"answer", answer}, {"backend", reasoner.name()}}, clock_);
  return answer;
}

StepOutcome Engine::Run(Session &session) const {
  if (session.failed) return StepOutcome::kFailed;
  if (session.final) return StepOutcome::kFinished;
  if (!session.plan) PlanLayers(session);
  while (true) {
    StepOutcome outcome = Advance(session);
    if (outcome != StepOutcome::kProgressed) return outcome;
  }
}

VanillaRun Engine::RunVanilla(std::string id, Query query,
                              EngineConfig config) const {
  if (Trim(query.text).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "query text is empty");
  }
  config.Validate();
  if (query.id.empty()) query.id = id;

  Session session;
  Emit(session, EventKind::kCreated,
       Json{{"session_id", id},
            {"query", query},
            {"config", config},
            {"pipeline", Name(PipelineKind::kVanilla)}},
       clock_);

  agents::Backend &reasoner = agents_.For(RoleKind::kReasoner);
  agents::BackendRequest request;
  request.role = RoleKind::kReasoner;
  request.step = PipelineStep::kVanilla;
  request.prompt = agents::RenderPrompt(
      agents_.prompts.For(PipelineStep::kVanilla), ContextFor(session, {}));

  std::string text;
  try {
    text = agents::CallBackend(reasoner, std::move(request));
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kEmptyResponse) {
      throw Error(ErrorCode::kBackend, e.what());
    }
    throw;
  }
  auto parsed = agents::ParseClaims(text);

  FinalAnswer answer;
  answer.text = text;
  Json payload{{"answer", answer},
               {"narrative", text},
               {"claims", parsed.claims},
               {"backend", reasoner.name()}};
  // Nothing in a vanilla trace is verified; score the trace as it will be.
  std::vector<TraceEvent> tentative = session.events;
  tentative.push_back(TraceEvent{0, "", EventKind::kIntegrated, payload});
  answer.quality = Quality(tentative);
  payload["answer"] = answer;

  Emit(session, EventKind::kIntegrated, std::move(payload), clock_);
  return VanillaRun{std::move(answer), std::move(session)};
}

}  // namespace layercot::core
