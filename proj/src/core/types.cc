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

#include "layercot/core/types.h"

#include <algorithm>
#include <array>
#include <string>

#include "layercot/core/error.h"

namespace layercot {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kPlannerUnavailable: return "PlannerUnavailable";
    case ErrorCode::kEmptyPlan: return "EmptyPlan";
    case ErrorCode::kNoPlan: return "NoPlan";
    case ErrorCode::kBackend: return "BackendError";
    case ErrorCode::kEmptyResponse: return "EmptyResponse";
    case ErrorCode::kWrongLayer: return "WrongLayer";
    case ErrorCode::kSessionClosed: return "SessionClosed";
    case ErrorCode::kNotReady: return "NotReady";
    case ErrorCode::kUnboundPlaceholder: return "UnboundPlaceholder";
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kConsistency: return "ConsistencyError";
    case ErrorCode::kBadParameter: return "BadParameter";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

namespace core {
namespace {

template <typename E, size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

template <typename E, size_t N>
std::string_view Lookup(const NameTable<E, N> &table, E value) {
  for (const auto &[v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E, size_t N>
E Parse(const NameTable<E, N> &table, std::string_view name,
        std::string_view what) {
  for (const auto &[v, n] : table) {
    if (n == name) return v;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

constexpr NameTable<SourceKind, 3> kSourceKinds{{
    {SourceKind::kKnowledge, "knowledge"},
    {SourceKind::kUser, "user"},
    {SourceKind::kNone, "none"},
}};

constexpr NameTable<ClaimStatus, 3> kClaimStatuses{{
    {ClaimStatus::kSupported, "Supported"},
    {ClaimStatus::kContradicted, "Contradicted"},
    {ClaimStatus::kUnknown, "Unknown"},
}};

constexpr NameTable<Aggregate, 3> kAggregates{{
    {Aggregate::kAccepted, "Accepted"},
    {Aggregate::kNeedsRefinement, "NeedsRefinement"},
    {Aggregate::kRejected, "Rejected"},
}};

constexpr NameTable<VerdictSource, 3> kVerdictSources{{
    {VerdictSource::kKnowledge, "knowledge"},
    {VerdictSource::kUser, "user"},
    {VerdictSource::kAgent, "agent"},
}};

constexpr NameTable<FeedbackAction, 3> kFeedbackActions{{
    {FeedbackAction::kApprove, "approve"},
    {FeedbackAction::kReject, "reject"},
    {FeedbackAction::kAnnotate, "annotate"},
}};

constexpr NameTable<LayerState, 7> kLayerStates{{
    {LayerState::kPending, "Pending"},
    {LayerState::kReasoning, "Reasoning"},
    {LayerState::kAwaitingVerification, "AwaitingVerification"},
    {LayerState::kAwaitingUser, "AwaitingUser"},
    {LayerState::kRefining, "Refining"},
    {LayerState::kAccepted, "Accepted"},
    {LayerState::kFailed, "Failed"},
}};

constexpr NameTable<EventKind, 9> kEventKinds{{
    {EventKind::kCreated, "Created"},
    {EventKind::kPlanned, "Planned"},
    {EventKind::kPartialGenerated, "PartialGenerated"},
    {EventKind::kVerdictRecorded, "VerdictRecorded"},
    {EventKind::kFeedbackReceived, "FeedbackReceived"},
    {EventKind::kRefined, "Refined"},
    {EventKind::kLayerAccepted, "LayerAccepted"},
    {EventKind::kLayerFailed, "LayerFailed"},
    {EventKind::kIntegrated, "Integrated"},
}};

constexpr NameTable<VerificationMode, 3> kModes{{
    {VerificationMode::kAutomatic, "automatic"},
    {VerificationMode::kInteractive, "interactive"},
    {VerificationMode::kHybrid, "hybrid"},
}};

constexpr NameTable<OnExhausted, 2> kOnExhausted{{
    {OnExhausted::kFailSession, "fail_session"},
    {OnExhausted::kAcceptFlagged, "accept_flagged"},
}};

constexpr NameTable<PipelineKind, 2> kPipelines{{
    {PipelineKind::kLayered, "layered"},
    {PipelineKind::kVanilla, "vanilla"},
}};

constexpr NameTable<SessionStatus, 5> kSessionStatuses{{
    {SessionStatus::kCreated, "Created"},
    {SessionStatus::kRunning, "Running"},
    {SessionStatus::kAwaitingUser, "AwaitingUser"},
    {SessionStatus::kFinished, "Finished"},
    {SessionStatus::kFailed, "Failed"},
}};

std::optional<std::string> OptionalString(const Json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::string_view Name(SourceKind v) { return Lookup(kSourceKinds, v); }
std::string_view Name(ClaimStatus v) { return Lookup(kClaimStatuses, v); }
std::string_view Name(Aggregate v) { return Lookup(kAggregates, v); }
std::string_view Name(VerdictSource v) { return Lookup(kVerdictSources, v); }
std::string_view Name(FeedbackAction v) { return Lookup(kFeedbackActions, v); }
std::string_view Name(LayerState v) { return Lookup(kLayerStates, v); }
std::string_view Name(EventKind v) { return Lookup(kEventKinds, v); }
std::string_view Name(VerificationMode v) { return Lookup(kModes, v); }
std::string_view Name(OnExhausted v) { return Lookup(kOnExhausted, v); }
std::string_view Name(PipelineKind v) { return Lookup(kPipelines, v); }
std::string_view Name(SessionStatus v) { return Lookup(kSessionStatuses, v); }

SourceKind ParseSourceKind(std::string_view name) {
  return Parse(kSourceKinds, name, "verification source");
}
ClaimStatus ParseClaimStatus(std::string_view name) {
  return Parse(kClaimStatuses, name, "claim status");
}
Aggregate ParseAggregate(std::string_view name) {
  return Parse(kAggregates, name, "aggregate");
}
VerdictSource ParseVerdictSource(std::string_view name) {
  return Parse(kVerdictSources, name, "verdict source");
}
FeedbackAction ParseFeedbackAction(std::string_view name) {
  return Parse(kFeedbackActions, name, "feedback action");
}
LayerState ParseLayerState(std::string_view name) {
  return Parse(kLayerStates, name, "layer state");
}
EventKind ParseEventKind(std::string_view name) {
  return Parse(kEventKinds, name, "event kind");
}
VerificationMode ParseVerificationMode(std::string_view name) {
  return Parse(kModes, name, "verification mode");
}
OnExhausted ParseOnExhausted(std::string_view name) {
  return Parse(kOnExhausted, name, "on_exhausted policy");
}
PipelineKind ParsePipelineKind(std::string_view name) {
  return Parse(kPipelines, name, "pipeline");
}

bool SubProblem::Requires(SourceKind kind) const {
  return std::find(verification_sources.begin(), verification_sources.end(),
                   kind) != verification_sources.end();
}

bool VerificationVerdict::HasContradiction() const {
  return std::any_of(per_claim.begin(), per_claim.end(), [](const auto &c) {
    return c.status == ClaimStatus::kContradicted;
  });
}

std::optional<ClaimStatus> VerificationVerdict::StatusOf(
    std::string_view claim_id) const {
  for (const auto &c : per_claim) {
    if (c.claim_id == claim_id) return c.status;
  }
  return std::nullopt;
}

void Feedback::Validate() const {
  if (layer_index < 0) {
    throw Error(ErrorCode::kInvalidArgument, "layer_index must be >= 0");
  }
  if (action == FeedbackAction::kReject && (!note || note->empty())) {
    throw Error(ErrorCode::kInvalidArgument, "reject requires a nonempty note");
  }
  if (action == FeedbackAction::kAnnotate &&
      (!added_constraint || added_constraint->empty())) {
    throw Error(ErrorCode::kInvalidArgument,
                "annotate requires a nonempty added_constraint");
  }
}

void EngineConfig::Validate() const {
  if (max_layers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_layers must be >= 1");
  }
  if (max_refinements < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_refinements must be >= 0");
  }
}

SessionStatus Session::Status() const {
  if (failed) return SessionStatus::kFailed;
  if (final) return SessionStatus::kFinished;
  if (!plan) return SessionStatus::kCreated;
  if (AwaitingLayer()) return SessionStatus::kAwaitingUser;
  return SessionStatus::kRunning;
}

std::optional<int> Session::CurrentLayer() const {
  for (size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].state != LayerState::kAccepted) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> Session::AwaitingLayer() const {
  for (size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].state == LayerState::kAwaitingUser) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

std::vector<LayerState> Session::LayerStates() const {
  std::vector<LayerState> states;
  states.reserve(layers.size());
  for (const auto &layer : layers) states.push_back(layer.state);
  return states;
}

void to_json(Json &j, const Query &v) {
  j = Json{{"id", v.id},
           {"text", v.text},
           {"domain_tag", v.domain_tag},
           {"constraints", v.constraints}};
}

void from_json(const Json &j, Query &v) {
  v.id = j.value("id", "");
  v.text = j.value("text", "");
  v.domain_tag = j.value("domain_tag", "");
  v.constraints = j.value("constraints", std::vector<std::string>{});
}

void to_json(Json &j, const SubProblem &v) {
  Json sources = Json::array();
  for (auto s : v.verification_sources) sources.push_back(Name(s));
  j = Json{{"index", v.index},
           {"objective", v.objective},
           {"verification_sources", sources}};
}

void from_json(const Json &j, SubProblem &v) {
  v.index = j.at("index").get<int>();
  v.objective = j.at("objective").get<std::string>();
  v.verification_sources.clear();
  for (const auto &s : j.value("verification_sources", Json::array())) {
    v.verification_sources.push_back(ParseSourceKind(s.get<std::string>()));
  }
}

void to_json(Json &j, const LayerPlan &v) {
  j = Json{{"sub_problems", v.sub_problems}};
}

void from_json(const Json &j, LayerPlan &v) {
  v.sub_problems = j.at("sub_problems").get<std::vector<SubProblem>>();
}

void to_json(Json &j, const Triple &v) {
  j = Json{{"subject", v.subject},
           {"predicate", v.predicate},
           {"object", v.object}};
}

void from_json(const Json &j, Triple &v) {
  v.subject = j.at("subject").get<std::string>();
  v.predicate = j.at("predicate").get<std::string>();
  v.object = j.at("object").get<std::string>();
}

void to_json(Json &j, const Claim &v) {
  j = Json{{"id", v.id}, {"statement", v.statement}};
  j["assertion"] = v.assertion ? Json(*v.assertion) : Json(nullptr);
  j["confidence"] = v.confidence ? Json(*v.confidence) : Json(nullptr);
}

void from_json(const Json &j, Claim &v) {
  v.id = j.at("id").get<std::string>();
  v.statement = j.at("statement").get<std::string>();
  v.assertion.reset();
  v.confidence.reset();
  if (j.contains("assertion") && !j["assertion"].is_null()) {
    v.assertion = j["assertion"].get<Triple>();
  }
  if (j.contains("confidence") && !j["confidence"].is_null()) {
    v.confidence = j["confidence"].get<double>();
  }
}

void to_json(Json &j, const PartialReasoning &v) {
  j = Json{{"layer", v.layer_index},
           {"attempt", v.attempt},
           {"narrative", v.narrative},
           {"claims", v.claims},
           {"warnings", v.warnings}};
}

void from_json(const Json &j, PartialReasoning &v) {
  v.layer_index = j.at("layer").get<int>();
  v.attempt = j.at("attempt").get<int>();
  v.narrative = j.at("narrative").get<std::string>();
  v.claims = j.at("claims").get<std::vector<Claim>>();
  v.warnings = j.value("warnings", std::vector<std::string>{});
}

void to_json(Json &j, const VerificationVerdict &v) {
  Json per_claim = Json::array();
  for (const auto &c : v.per_claim) {
    per_claim.push_back({{"claim", c.claim_id}, {"status", Name(c.status)}});
  }
  Json evidence = Json::array();
  for (const auto &e : v.evidence) {
    evidence.push_back({{"claim", e.claim_id}, {"text", e.text}});
  }
  j = Json{{"layer", v.layer_index},
           {"attempt", v.attempt},
           {"per_claim", per_claim},
           {"aggregate", Name(v.aggregate)},
           {"evidence", evidence},
           {"source", Name(v.source)}};
}

void from_json(const Json &j, VerificationVerdict &v) {
  v.layer_index = j.at("layer").get<int>();
  v.attempt = j.at("attempt").get<int>();
  v.per_claim.clear();
  for (const auto &c : j.at("per_claim")) {
    v.per_claim.push_back({c.at("claim").get<std::string>(),
                           ParseClaimStatus(c.at("status").get<std::string>())});
  }
  v.aggregate = ParseAggregate(j.at("aggregate").get<std::string>());
  v.evidence.clear();
  for (const auto &e : j.at("evidence")) {
    v.evidence.push_back(
        {e.at("claim").get<std::string>(), e.at("text").get<std::string>()});
  }
  v.source = ParseVerdictSource(j.at("source").get<std::string>());
}

void to_json(Json &j, const Feedback &v) {
  j = Json{{"session_id", v.session_id},
           {"layer", v.layer_index},
           {"action", Name(v.action)}};
  j["note"] = v.note ? Json(*v.note) : Json(nullptr);
  j["added_constraint"] =
      v.added_constraint ? Json(*v.added_constraint) : Json(nullptr);
  if (v.attempt) j["attempt"] = *v.attempt;
}

void from_json(const Json &j, Feedback &v) {
  v.session_id = j.value("session_id", "");
  if (j.contains("layer")) {
    v.layer_index = j.at("layer").get<int>();
  } else {
    v.layer_index = j.at("layer_index").get<int>();
  }
  v.action = ParseFeedbackAction(j.at("action").get<std::string>());
  v.note = OptionalString(j, "note");
  v.added_constraint = OptionalString(j, "added_constraint");
  v.attempt.reset();
  if (j.contains("attempt") && !j["attempt"].is_null()) {
    v.attempt = j["attempt"].get<int>();
  }
}

void to_json(Json &j, const TraceEvent &v) {
  j = Json{{"seq", v.seq},
           {"ts", v.ts},
           {"kind", Name(v.kind)},
           {"payload", v.payload}};
}

void from_json(const Json &j, TraceEvent &v) {
  v.seq = j.at("seq").get<std::uint64_t>();
  v.ts = j.at("ts").get<std::string>();
  v.kind = ParseEventKind(j.at("kind").get<std::string>());
  v.payload = j.at("payload");
}

void to_json(Json &j, const FinalAnswer &v) {
  j = Json{{"text", v.text},
           {"supporting_layers", v.supporting_layers},
           {"quality", v.quality}};
}

void from_json(const Json &j, FinalAnswer &v) {
  v.text = j.at("text").get<std::string>();
  v.supporting_layers = j.at("supporting_layers").get<std::vector<int>>();
  v.quality = j.at("quality").get<double>();
}

void to_json(Json &j, const EngineConfig &v) {
  j = Json{{"max_layers", v.max_layers},
           {"max_refinements", v.max_refinements},
           {"verification_mode", Name(v.verification_mode)},
           {"backend", v.backend},
           {"on_exhausted", Name(v.on_exhausted)}};
}

// Missing keys keep their current values so a partial document can
// override a base config.
void from_json(const Json &j, EngineConfig &v) {
  if (j.contains("max_layers")) v.max_layers = j["max_layers"].get<int>();
  if (j.contains("max_refinements")) {
    v.max_refinements = j["max_refinements"].get<int>();
  }
  if (j.contains("verification_mode")) {
    v.verification_mode =
        ParseVerificationMode(j["verification_mode"].get<std::string>());
  } else if (j.contains("mode")) {
    v.verification_mode = ParseVerificationMode(j["mode"].get<std::string>());
  }
  if (j.contains("backend")) v.backend = j["backend"].get<std::string>();
  if (j.contains("on_exhausted")) {
    v.on_exhausted = ParseOnExhausted(j["on_exhausted"].get<std::string>());
  }
}

}  // namespace core
}  // namespace layercot
