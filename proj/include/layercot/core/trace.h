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

// Event sourcing for sessions. Every session mutation is a TraceEvent folded
// into the session by ApplyEvent, so replaying a session's event list
// rebuilds it exactly.
//
// Payloads by kind:
//   Created           {session_id, query, config, pipeline, scenario?}
//   Planned           {plan, proposed, backend}
//   PartialGenerated  {partial, backend}
//   VerdictRecorded   {verdict, await_user}
//   FeedbackReceived  {feedback}
//   Refined           {partial, rejection_note, addressed, backend}
//   LayerAccepted     {layer, source, flagged}
//   LayerFailed       {layer, reason}
//   Integrated        {answer, backend, narrative?, claims?}

#ifndef LAYERCOT_CORE_TRACE_H_
#define LAYERCOT_CORE_TRACE_H_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layercot/core/types.h"

namespace layercot::core {

// Produces event timestamps.
using Clock = std::function<std::string()>;

// UTC wall clock, ISO-8601 with milliseconds.
Clock SystemClock();

// Folds one event into the session. Throws Error(kInvalidArgument) when the
// event does not follow from the current state (wrong sequence number, wrong
// layer, illegal transition).
void ApplyEvent(Session &session, const TraceEvent &event);

// Rebuilds a session from its event list.
Session Replay(std::span<const TraceEvent> events);

// Appends an event with the next sequence number and applies it.
const TraceEvent &Emit(Session &session, EventKind kind, Json payload,
                       const Clock &clock);

// Status view of a session, also the service's GET /sessions/{id} body.
// Deterministic: equal sessions give equal dumps.
Json SessionSnapshot(const Session &session);

// One compact JSON object per line, each terminated by '\n'.
std::string ToJsonLine(const TraceEvent &event);
std::string ToJsonLines(std::span<const TraceEvent> events);
// Throws Error(kParse) with the 1-based line of the first bad record.
std::vector<TraceEvent> ParseJsonLines(std::string_view text);

// Backend completions recorded in a trace (plan, partials, refinements,
// integration).
int BackendCalls(std::span<const TraceEvent> events);

}  // namespace layercot::core

#endif  // LAYERCOT_CORE_TRACE_H_
