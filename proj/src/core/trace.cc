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

#include "layercot/core/trace.h"

#include <chrono>
#include <ctime>
#include <set>

#include "fmt/format.h"
#include "layercot/core/error.h"
#include "layercot/core/quality.h"

namespace layercot::core {
namespace {

[[noreturn]] void Reject(const TraceEvent &event, const std::string &why) {
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("event {} ({}): {}", event.seq, Name(event.kind), why));
}

LayerRecord &CurrentRecord(Session &session, const TraceEvent &event,
                           int layer) {
  auto current = session.CurrentLayer();
  if (!current || *current != layer) {
    Reject(event, fmt::format("layer {} is not the current layer", layer));
  }
  return session.layers[layer];
}

void ExpectState(const TraceEvent &event, const LayerRecord &record,
                 std::initializer_list<LayerState> allowed) {
  for (auto s : allowed) {
    if (record.state == s) return;
  }
  Reject(event, fmt::format("layer is {}", Name(record.state)));
}

void ValidatePlan(const TraceEvent &event, const LayerPlan &plan,
                  const EngineConfig &config) {
  if (plan.sub_problems.empty() || plan.size() > config.max_layers) {
    Reject(event, fmt::format("plan has {} layers, allowed 1..{}", plan.size(),
                              config.max_layers));
  }
  for (int i = 0; i < plan.size(); ++i) {
    if (plan.sub_problems[i].index != i) Reject(event, "plan indices not contiguous");
    if (plan.sub_problems[i].objective.empty()) Reject(event, "empty objective");
  }
}

void ApplyPartial(Session &session, const TraceEvent &event, bool refined) {
  auto partial = event.payload.at("partial").get<PartialReasoning>();
  LayerRecord &record = CurrentRecord(session, event, partial.layer_index);
  if (refined) {
    ExpectState(event, record, {LayerState::kRefining});
    if (partial.attempt != record.attempt + 1) {
      Reject(event, "refinement must increment the attempt");
    }
    ++record.refinements;
    record.rejection_note.reset();
  } else {
    ExpectState(event, record, {LayerState::kReasoning});
    if (partial.attempt != std::max(record.attempt, 1)) {
      Reject(event, "unexpected attempt number");
    }
  }
  if (partial.attempt > session.config.max_refinements + 1) {
    Reject(event, "attempt exceeds the refinement budget");
  }
  std::set<std::string> ids;
  for (const auto &claim : partial.claims) {
    if (!ids.insert(claim.id).second) Reject(event, "duplicate claim id");
  }
  record.attempt = partial.attempt;
  record.partial = std::move(partial);
  record.verdict.reset();
  record.state = LayerState::kAwaitingVerification;
}

void ApplyVerdict(Session &session, const TraceEvent &event) {
  auto verdict = event.payload.at("verdict").get<VerificationVerdict>();
  LayerRecord &record = CurrentRecord(session, event, verdict.layer_index);
  ExpectState(event, record, {LayerState::kAwaitingVerification});
  if (verdict.attempt != record.attempt) Reject(event, "verdict for stale attempt");

  // Every claim appears exactly once.
  const auto &claims = record.partial->claims;
  if (verdict.per_claim.size() != claims.size()) {
    Reject(event, "verdict does not cover every claim");
  }
  for (size_t i = 0; i < claims.size(); ++i) {
    if (verdict.per_claim[i].claim_id != claims[i].id) {
      Reject(event, "verdict claim ids do not match the partial");
    }
  }
  if (verdict.aggregate == Aggregate::kAccepted && verdict.HasContradiction()) {
    Reject(event, "accepted verdict with a contradicted claim");
  }

  record.verdict = std::move(verdict);
  if (event.payload.value("await_user", false)) {
    record.state = LayerState::kAwaitingUser;
  } else if (record.verdict->aggregate == Aggregate::kNeedsRefinement) {
    record.state = LayerState::kRefining;
  }
}

void ApplyFeedback(Session &session, const TraceEvent &event) {
  auto feedback = event.payload.at("feedback").get<Feedback>();
  LayerRecord &record = CurrentRecord(session, event, feedback.layer_index);
  ExpectState(event, record, {LayerState::kAwaitingUser});
  switch (feedback.action) {
    case FeedbackAction::kApprove:
      break;  // LayerAccepted follows
    case FeedbackAction::kReject:
      if (record.attempt <= session.config.max_refinements) {
        record.state = LayerState::kRefining;
        record.rejection_note = feedback.note;
      }
      break;  // otherwise LayerFailed follows
    case FeedbackAction::kAnnotate:
      session.query.constraints.push_back(feedback.added_constraint.value_or(""));
      record.verdict.reset();
      record.state = LayerState::kReasoning;
      break;
  }
}

void ApplyLayerAccepted(Session &session, const TraceEvent &event) {
  int layer = event.payload.at("layer").get<int>();
  LayerRecord &record = CurrentRecord(session, event, layer);
  ExpectState(event, record,
              {LayerState::kAwaitingVerification, LayerState::kAwaitingUser});
  if (!record.verdict) Reject(event, "layer accepted without a verdict");
  record.state = LayerState::kAccepted;
  record.flagged = event.payload.value("flagged", false);
  if (layer + 1 < static_cast<int>(session.layers.size())) {
    session.layers[layer + 1].state = LayerState::kReasoning;
  }
}

void ApplyLayerFailed(Session &session, const TraceEvent &event) {
  int layer = event.payload.at("layer").get<int>();
  LayerRecord &record = CurrentRecord(session, event, layer);
  ExpectState(event, record,
              {LayerState::kAwaitingVerification, LayerState::kAwaitingUser});
  record.state = LayerState::kFailed;
  session.failed = true;
}

void ApplyIntegrated(Session &session, const TraceEvent &event) {
  if (session.pipeline == PipelineKind::kLayered) {
    if (!session.plan || session.CurrentLayer()) {
      Reject(event, "integration before every layer is accepted");
    }
  }
  session.final = event.payload.at("answer").get<FinalAnswer>();
}

}  // namespace

Clock SystemClock() {
  return [] {
    auto now = std::chrono::system_clock::now();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  now.time_since_epoch()) %
              1000;
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
    return fmt::format("{}.{:03d}Z", buf, static_cast<int>(ms.count()));
  };
}

void ApplyEvent(Session &session, const TraceEvent &event) {
  if (event.seq != session.events.size() + 1) {
    Reject(event, fmt::format("expected sequence number {}",
                              session.events.size() + 1));
  }
  if (event.kind == EventKind::kCreated) {
    if (!session.events.empty()) Reject(event, "session already created");
  } else if (session.events.empty()) {
    Reject(event, "first event must be Created");
  } else if (session.Closed()) {
    Reject(event, "session is closed");
  }

  try {
    switch (event.kind) {
      case EventKind::kCreated: {
        session.id = event.payload.at("session_id").get<std::string>();
        session.query = event.payload.at("query").get<Query>();
        EngineConfig config;
        from_json(event.payload.at("config"), config);
        config.Validate();
        session.config = config;
        session.pipeline =
            ParsePipelineKind(event.payload.value("pipeline", "layered"));
        break;
      }
      case EventKind::kPlanned: {
        if (session.pipeline != PipelineKind::kLayered) {
          Reject(event, "vanilla sessions are not planned");
        }
        if (session.plan) Reject(event, "session already planned");
        auto plan = event.payload.at("plan").get<LayerPlan>();
        ValidatePlan(event, plan, session.config);
        session.layers.assign(plan.sub_problems.size(), LayerRecord{});
        session.layers[0].state = LayerState::kReasoning;
        session.plan = std::move(plan);
        break;
      }
      case EventKind::kPartialGenerated:
        ApplyPartial(session, event, /*refined=*/false);
        break;
      case EventKind::kRefined:
        ApplyPartial(session, event, /*refined=*/true);
        break;
      case EventKind::kVerdictRecorded:
        ApplyVerdict(session, event);
        break;
      case EventKind::kFeedbackReceived:
        ApplyFeedback(session, event);
        break;
      case EventKind::kLayerAccepted:
        ApplyLayerAccepted(session, event);
        break;
      case EventKind::kLayerFailed:
        ApplyLayerFailed(session, event);
        break;
      case EventKind::kIntegrated:
        ApplyIntegrated(session, event);
        break;
    }
  } catch (const Json::exception &e) {
    Reject(event, std::string("malformed payload: ") + e.what());
  }
  session.events.push_back(event);
}

Session Replay(std::span<const TraceEvent> events) {
  Session session;
  for (const auto &event : events) ApplyEvent(session, event);
  return session;
}

const TraceEvent &Emit(Session &session, EventKind kind, Json payload,
                       const Clock &clock) {
  TraceEvent event;
  event.seq = session.events.size() + 1;
  event.ts = clock ? clock() : std::string();
  event.kind = kind;
  event.payload = std::move(payload);
  ApplyEvent(session, event);
  return session.events.back();
}

Json SessionSnapshot(const Session &session) {
  Json layers = Json::array();
  for (size_t i = 0; i < session.layers.size(); ++i) {
    const LayerRecord &record = session.layers[i];
    const SubProblem &sub = session.plan->sub_problems[i];
    Json layer{{"index", sub.index},
               {"objective", sub.objective},
               {"verification_sources", Json(sub)["verification_sources"]},
               {"state", Name(record.state)},
               {"attempt", record.attempt},
               {"refinements", record.refinements},
               {"flagged", record.flagged}};
    layer["rejection_note"] =
        record.rejection_note ? Json(*record.rejection_note) : Json(nullptr);
    layer["partial"] = record.partial ? Json(*record.partial) : Json(nullptr);
    layer["verdict"] = record.verdict ? Json(*record.verdict) : Json(nullptr);
    layers.push_back(std::move(layer));
  }

  Json snapshot{{"id", session.id},
                {"pipeline", Name(session.pipeline)},
                {"status", Name(session.Status())},
                {"query", session.query},
                {"config", session.config},
                {"layers", layers},
                {"quality", Quality(session.events)},
                {"backend_calls", BackendCalls(session.events)},
                {"event_count", session.events.size()}};
  snapshot["plan"] = session.plan ? Json(*session.plan) : Json(nullptr);
  auto awaiting = session.AwaitingLayer();
  snapshot["awaiting_layer"] = awaiting ? Json(*awaiting) : Json(nullptr);
  auto current = session.Closed() ? std::nullopt : session.CurrentLayer();
  snapshot["current_layer"] =
      current && session.plan ? Json(*current) : Json(nullptr);
  snapshot["final"] = session.final ? Json(*session.final) : Json(nullptr);
  snapshot["created"] =
      session.events.empty() ? Json(nullptr) : Json(session.events.front().ts);
  return snapshot;
}

std::string ToJsonLine(const TraceEvent &event) {
  return Json(event).dump() + "\n";
}

std::string ToJsonLines(std::span<const TraceEvent> events) {
  std::string out;
  for (const auto &event : events) out += ToJsonLine(event);
  return out;
}

std::vector<TraceEvent> ParseJsonLines(std::string_view text) {
  std::vector<TraceEvent> events;
  int line_number = 0;
  size_t start = 0;
  while (start < text.size()) {
    ++line_number;
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      throw Error(ErrorCode::kParse,
                  fmt::format("line {}: record is not newline-terminated",
                              line_number),
                  line_number);
    }
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    try {
      events.push_back(Json::parse(line).get<TraceEvent>());
    } catch (const Json::exception &e) {
      throw Error(ErrorCode::kParse,
                  fmt::format("line {}: {}", line_number, e.what()),
                  line_number);
    } catch (const Error &e) {
      throw Error(ErrorCode::kParse,
                  fmt::format("line {}: {}", line_number, e.what()),
                  line_number);
    }
  }
  return events;
}

int BackendCalls(std::span<const TraceEvent> events) {
  int calls = 0;
  for (const auto &event : events) {
    switch (event.kind) {
      case EventKind::kPlanned:
      case EventKind::kPartialGenerated:
      case EventKind::kRefined:
      case EventKind::kIntegrated:
        ++calls;
        break;
      default:
        break;
    }
  }
  return calls;
}

}  // namespace layercot::core
