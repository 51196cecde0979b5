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

#include "gtest/gtest.h"
#include "layercot/core/error.h"
#include "layercot/core/quality.h"
#include "test-util.h"

namespace layercot::core {
namespace {

using testing::LoadRig;

Session FinishedMedical(VerificationMode mode) {
  auto rig = LoadRig("medical");
  EngineConfig config;
  config.verification_mode = mode;
  auto session = rig.engine->Create("m", rig.query(), config);
  rig.engine->Run(session);
  while (auto layer = session.AwaitingLayer()) {
    rig.engine->ApplyFeedback(session, {"m", *layer, FeedbackAction::kApprove, {}, {}, {}});
    rig.engine->Run(session);
  }
  return session;
}

TEST(TraceTest, ReplayReproducesTheLiveSession) {
  for (auto mode : {VerificationMode::kAutomatic, VerificationMode::kInteractive,
                    VerificationMode::kHybrid}) {
    auto session = FinishedMedical(mode);
    ASSERT_EQ(session.Status(), SessionStatus::kFinished);
    EXPECT_EQ(SessionSnapshot(Replay(session.events)), SessionSnapshot(session));
  }
}

TEST(TraceTest, JsonLinesRoundTrip) {
  auto session = FinishedMedical(VerificationMode::kInteractive);
  const std::string text = ToJsonLines(session.events);
  auto decoded = ParseJsonLines(text);
  ASSERT_EQ(decoded.size(), session.events.size());
  EXPECT_EQ(ToJsonLines(decoded), text);
  for (size_t i = 0; i < decoded.size(); ++i) {
    EXPECT_EQ(decoded[i].seq, i + 1);
    EXPECT_EQ(decoded[i].kind, session.events[i].kind);
  }
  // One record per line.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'),
            static_cast<long>(session.events.size()));
}

TEST(TraceTest, ParseErrorsReportTheLine) {
  auto session = FinishedMedical(VerificationMode::kAutomatic);
  std::string text = ToJsonLine(session.events[0]) + ToJsonLine(session.events[1]);
  try {
    ParseJsonLines(text + "{\"seq\": 3, \"ts\":");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.line(), 3);
  }
  try {
    ParseJsonLines(text + "{\"seq\": 3, \"ts\": \"x\", \"kind\": \"Bogus\", \"payload\": {}}\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_TRUE(ParseJsonLines("").empty());
}

TEST(TraceTest, CreatedComesFirstAndOnlyOnce) {
  auto session = FinishedMedical(VerificationMode::kAutomatic);
  EXPECT_EQ(session.events.front().kind, EventKind::kCreated);
  std::vector<TraceEvent> events(session.events.begin() + 1, session.events.end());
  for (size_t i = 0; i < events.size(); ++i) events[i].seq = i + 1;
  EXPECT_THROW(Replay(events), Error);

  std::vector<TraceEvent> twice{session.events[0], session.events[0]};
  twice[1].seq = 2;
  EXPECT_THROW(Replay(twice), Error);
}

TEST(TraceTest, ReducerRejectsInconsistentLogs) {
  auto session = FinishedMedical(VerificationMode::kAutomatic);
  auto expect_rejected = [&](std::vector<TraceEvent> events, const char *what) {
    EXPECT_THROW(Replay(events), Error) << what;
  };

  // Gap in sequence numbers.
  auto gap = session.events;
  gap[2].seq = 9;
  expect_rejected(gap, "gap");

  // Event after Integrated.
  auto after = session.events;
  TraceEvent extra = after.back();
  extra.seq = after.size() + 1;
  after.push_back(extra);
  expect_rejected(after, "after close");

  // Accepting a layer that is not current.
  auto skip = session.events;
  for (auto &e : skip) {
    if (e.kind == EventKind::kLayerAccepted) {
      e.payload["layer"] = 1;
      break;
    }
  }
  expect_rejected(skip, "skip");

  // Accepted aggregate with a contradicted claim.
  auto lying = session.events;
  for (auto &e : lying) {
    if (e.kind == EventKind::kVerdictRecorded) {
      e.payload["verdict"]["per_claim"][0]["status"] = "Contradicted";
      break;
    }
  }
  expect_rejected(lying, "contradiction accepted");

  // Malformed payload.
  auto broken = session.events;
  broken[1].payload = Json::object();
  expect_rejected(broken, "malformed");

  // Integration before the last layer.
  std::vector<TraceEvent> early;
  for (const auto &e : session.events) {
    early.push_back(e);
    if (e.kind == EventKind::kLayerAccepted) break;
  }
  TraceEvent integrated = session.events.back();
  integrated.seq = early.size() + 1;
  early.push_back(integrated);
  expect_rejected(early, "early integration");
}

TEST(TraceTest, RefinementMustIncrementTheAttempt) {
  auto rig = LoadRig("finance");
  auto session = rig.engine->Create("f", rig.query(), EngineConfig{});
  rig.engine->Run(session);
  auto events = session.events;
  for (auto &e : events) {
    if (e.kind == EventKind::kRefined) {
      e.payload["partial"]["attempt"] = 1;
      break;
    }
  }
  EXPECT_THROW(Replay(events), Error);
}

TEST(TraceTest, BackendCallsCountsGenerationEvents) {
  auto rig = LoadRig("finance");
  auto session = rig.engine->Create("f", rig.query(), EngineConfig{});
  rig.engine->Run(session);
  EXPECT_EQ(BackendCalls(session.events), static_cast<int>(rig.backend->calls()));
}

TEST(QualityTest, VerifiedShareOfEmittedClaims) {
  auto rig = LoadRig("finance");
  auto session = rig.engine->Create("f", rig.query(), EngineConfig{});
  rig.engine->Run(session);
  // Independent count from the event payloads.
  int total = 0, supported = 0;
  std::map<int, Json> last_partial;
  for (const auto &e : session.events) {
    if (e.kind == EventKind::kPartialGenerated || e.kind == EventKind::kRefined) {
      total += e.payload["partial"]["claims"].size();
    }
    if (e.kind == EventKind::kVerdictRecorded) {
      for (const auto &c : e.payload["verdict"]["per_claim"]) {
        supported += c["status"] == "Supported";
      }
    }
  }
  ASSERT_GT(total, 0);
  EXPECT_DOUBLE_EQ(Quality(session.events), static_cast<double>(supported) / total);
  EXPECT_DOUBLE_EQ(session.final->quality, Quality(session.events));
}

TEST(QualityTest, ApprovalVerifiesEveryClaimOfTheGeneration) {
  auto session = FinishedMedical(VerificationMode::kInteractive);
  EXPECT_DOUBLE_EQ(Quality(session.events), 1.0);
}

TEST(QualityTest, EmptyTraceIsZero) {
  EXPECT_DOUBLE_EQ(Quality({}), 0.0);
}

}  // namespace
}  // namespace layercot::core
