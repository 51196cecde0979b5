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

// Domain types shared by the layered pipeline: queries, layer plans, claims,
// partial reasoning, verdicts, feedback, trace events and sessions.

#ifndef LAYERCOT_CORE_TYPES_H_
#define LAYERCOT_CORE_TYPES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace layercot::core {

using Json = nlohmann::json;

struct Query {
  std::string id;
  std::string text;
  std::string domain_tag;
  // User-supplied constraints. Annotating feedback appends to this list.
  std::vector<std::string> constraints;
};

// Where a layer's verification may come from.
enum class SourceKind { kKnowledge, kUser, kNone };

struct SubProblem {
  int index = 0;
  std::string objective;
  std::vector<SourceKind> verification_sources;

  bool Requires(SourceKind kind) const;
};

struct LayerPlan {
  std::vector<SubProblem> sub_problems;

  int size() const { return static_cast<int>(sub_problems.size()); }
};

// A structured (subject, predicate, object) assertion.
struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;

  bool operator==(const Triple &other) const = default;
};

struct Claim {
  std::string id;
  std::string statement;
  std::optional<Triple> assertion;
  std::optional<double> confidence;

  bool operator==(const Claim &other) const = default;
};

struct PartialReasoning {
  int layer_index = 0;
  std::string narrative;
  std::vector<Claim> claims;
  int attempt = 1;
  // Malformed claim lines found while parsing the narrative.
  std::vector<std::string> warnings;
};

enum class ClaimStatus { kSupported, kContradicted, kUnknown };
enum class Aggregate { kAccepted, kNeedsRefinement, kRejected };
enum class VerdictSource { kKnowledge, kUser, kAgent };

struct ClaimVerdict {
  std::string claim_id;
  ClaimStatus status = ClaimStatus::kUnknown;
};

struct Evidence {
  std::string claim_id;
  std::string text;
};

struct VerificationVerdict {
  int layer_index = 0;
  int attempt = 1;
  // One entry per claim, in claim order.
  std::vector<ClaimVerdict> per_claim;
  Aggregate aggregate = Aggregate::kAccepted;
  std::vector<Evidence> evidence;
  VerdictSource source = VerdictSource::kKnowledge;

  bool HasContradiction() const;
  std::optional<ClaimStatus> StatusOf(std::string_view claim_id) const;
};

enum class FeedbackAction { kApprove, kReject, kAnnotate };

struct Feedback {
  std::string session_id;
  int layer_index = 0;
  FeedbackAction action = FeedbackAction::kApprove;
  std::optional<std::string> note;
  std::optional<std::string> added_constraint;
  // When set, the feedback only applies to this attempt of the layer.
  std::optional<int> attempt;

  // Throws kInvalidArgument when a reject carries no note or an annotate
  // carries no constraint.
  void Validate() const;
};

enum class LayerState {
  kPending,
  kReasoning,
  kAwaitingVerification,
  kAwaitingUser,
  kRefining,
  kAccepted,
  kFailed,
};

enum class EventKind {
  kCreated,
  kPlanned,
  kPartialGenerated,
  kVerdictRecorded,
  kFeedbackReceived,
  kRefined,
  kLayerAccepted,
  kLayerFailed,
  kIntegrated,
};

struct TraceEvent {
  std::uint64_t seq = 0;
  std::string ts;
  EventKind kind = EventKind::kCreated;
  Json payload;
};

struct FinalAnswer {
  std::string text;
  std::vector<int> supporting_layers;
  double quality = 0.0;
};

enum class VerificationMode { kAutomatic, kInteractive, kHybrid };
enum class OnExhausted { kFailSession, kAcceptFlagged };

struct EngineConfig {
  int max_layers = 5;
  int max_refinements = 2;
  VerificationMode verification_mode = VerificationMode::kAutomatic;
  std::string backend = "scripted";
  OnExhausted on_exhausted = OnExhausted::kFailSession;

  void Validate() const;
};

// Per-layer state folded from the event log.
struct LayerRecord {
  LayerState state = LayerState::kPending;
  int attempt = 0;
  int refinements = 0;
  std::optional<PartialReasoning> partial;
  std::optional<VerificationVerdict> verdict;
  std::optional<std::string> rejection_note;
  // Set when the layer was accepted with its budget exhausted and a
  // contradiction still standing (on_exhausted = accept_flagged).
  bool flagged = false;
};

enum class PipelineKind { kLayered, kVanilla };
enum class SessionStatus { kCreated, kRunning, kAwaitingUser, kFinished, kFailed };

struct Session {
  std::string id;
  Query query;
  EngineConfig config;
  PipelineKind pipeline = PipelineKind::kLayered;
  std::optional<LayerPlan> plan;
  std::vector<LayerRecord> layers;
  std::vector<TraceEvent> events;
  std::optional<FinalAnswer> final;
  bool failed = false;

  SessionStatus Status() const;
  bool Closed() const { return final.has_value() || failed; }
  // First layer that is not yet accepted, if any.
  std::optional<int> CurrentLayer() const;
  // Layer currently blocked on user feedback, if any.
  std::optional<int> AwaitingLayer() const;
  std::vector<LayerState> LayerStates() const;
};

// Enum names used on the wire. Parse functions throw kInvalidArgument on
// unknown names.
std::string_view Name(SourceKind v);
std::string_view Name(ClaimStatus v);
std::string_view Name(Aggregate v);
std::string_view Name(VerdictSource v);
std::string_view Name(FeedbackAction v);
std::string_view Name(LayerState v);
std::string_view Name(EventKind v);
std::string_view Name(VerificationMode v);
std::string_view Name(OnExhausted v);
std::string_view Name(PipelineKind v);
std::string_view Name(SessionStatus v);

SourceKind ParseSourceKind(std::string_view name);
ClaimStatus ParseClaimStatus(std::string_view name);
Aggregate ParseAggregate(std::string_view name);
VerdictSource ParseVerdictSource(std::string_view name);
FeedbackAction ParseFeedbackAction(std::string_view name);
LayerState ParseLayerState(std::string_view name);
EventKind ParseEventKind(std::string_view name);
VerificationMode ParseVerificationMode(std::string_view name);
OnExhausted ParseOnExhausted(std::string_view name);
PipelineKind ParsePipelineKind(std::string_view name);

// JSON mappings for the wire and event payloads.
void to_json(Json &j, const Query &v);
void from_json(const Json &j, Query &v);
void to_json(Json &j, const SubProblem &v);
void from_json(const Json &j, SubProblem &v);
void to_json(Json &j, const LayerPlan &v);
void from_json(const Json &j, LayerPlan &v);
void to_json(Json &j, const Triple &v);
void from_json(const Json &j, Triple &v);
void to_json(Json &j, const Claim &v);
void from_json(const Json &j, Claim &v);
void to_json(Json &j, const PartialReasoning &v);
void from_json(const Json &j, PartialReasoning &v);
void to_json(Json &j, const VerificationVerdict &v);
void from_json(const Json &j, VerificationVerdict &v);
void to_json(Json &j, const Feedback &v);
void from_json(const Json &j, Feedback &v);
void to_json(Json &j, const TraceEvent &v);
void from_json(const Json &j, TraceEvent &v);
void to_json(Json &j, const FinalAnswer &v);
void from_json(const Json &j, FinalAnswer &v);
void to_json(Json &j, const EngineConfig &v);
void from_json(const Json &j, EngineConfig &v);

}  // namespace layercot::core

#endif  // LAYERCOT_CORE_TYPES_H_
