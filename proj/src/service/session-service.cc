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

#include "layercot/service/session-service.h"

#include <algorithm>
#include <random>

#include "fmt/format.h"
#include "layercot/core/strings.h"
#include "layercot/core/trace.h"
#include "layercot/sim/sim.h"
#include "spdlog/spdlog.h"

namespace layercot::service {

using core::Json;

namespace {

constexpr std::int64_t kMaxSimTasks = 100'000'000;

[[noreturn]] void BadRequest(const std::string &message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

std::optional<std::string> StringField(const Json &body, const char *key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  if (!body[key].is_string()) BadRequest(fmt::format("'{}' must be a string", key));
  return body[key].get<std::string>();
}

std::optional<std::string> ScenarioOf(const core::Session &session) {
  if (session.events.empty()) return std::nullopt;
  const Json &payload = session.events.front().payload;
  if (!payload.contains("scenario")) return std::nullopt;
  return payload["scenario"].get<std::string>();
}

// Same layer and content as the last feedback the session received.
bool RepeatsLastFeedback(const core::Session &session,
                         const core::Feedback &feedback) {
  for (auto it = session.events.rbegin(); it != session.events.rend(); ++it) {
    if (it->kind != core::EventKind::kFeedbackReceived) continue;
    auto last = it->payload.at("feedback").get<core::Feedback>();
    return last.layer_index == feedback.layer_index &&
           last.action == feedback.action && last.note == feedback.note &&
           last.added_constraint == feedback.added_constraint;
  }
  return false;
}

Json Summary(const core::Session &session) {
  Json out{{"id", session.id},
           {"status", core::Name(session.Status())},
           {"pipeline", core::Name(session.pipeline)},
           {"query", session.query.text},
           {"domain_tag", session.query.domain_tag},
           {"layers", session.layers.size()},
           {"event_count", session.events.size()}};
  auto awaiting = session.AwaitingLayer();
  out["awaiting_layer"] = awaiting ? Json(*awaiting) : Json(nullptr);
  out["created"] =
      session.events.empty() ? Json(nullptr) : Json(session.events.front().ts);
  return out;
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kBadParameter:
    case ErrorCode::kUnboundPlaceholder:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kWrongLayer:
    case ErrorCode::kSessionClosed:
    case ErrorCode::kNotReady:
    case ErrorCode::kNoPlan:
      return 409;
    case ErrorCode::kBackend:
    case ErrorCode::kPlannerUnavailable:
    case ErrorCode::kEmptyPlan:
    case ErrorCode::kEmptyResponse:
    case ErrorCode::kBudgetExhausted:
      return 502;
    case ErrorCode::kConsistency:
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

SessionService::SessionService(AppConfig config, core::Clock clock)
    : config_(config),
      clock_(clock),
      engines_(std::move(config), std::move(clock)),
      store_(config_.storage_root) {
  ResumeAll();
}

int SessionService::ResumeAll() {
  ResumeResult result = store_.ResumeAll();
  int loaded = 0;
  std::lock_guard lock(mu_);
  for (auto &session : result.sessions) {
    if (sessions_.count(session.id) > 0) continue;
    auto entry = std::make_shared<Entry>();
    entry->persisted = session.events.size();
    entry->scenario = ScenarioOf(session);
    std::string id = session.id;
    entry->session = std::move(session);
    sessions_.emplace(std::move(id), std::move(entry));
    ++loaded;
  }
  spdlog::info("resumed {} session(s), quarantined {}", loaded,
               result.quarantined.size());
  return loaded;
}

std::shared_ptr<SessionService::Entry> SessionService::Find(
    const std::string &id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
  }
  return it->second;
}

std::string SessionService::NewId() {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  while (true) {
    std::string id = fmt::format("s-{:012x}", gen() & 0xffffffffffffULL);
    std::lock_guard lock(mu_);
    if (sessions_.count(id) == 0 && !store_.Exists(id)) return id;
  }
}

void SessionService::Persist(Entry &entry) {
  const auto &events = entry.session.events;
  if (entry.persisted >= events.size()) return;
  store_.Append(entry.session.id,
                std::span(events).subspan(entry.persisted));
  entry.persisted = events.size();
}

void SessionService::Drive(Entry &entry) {
  if (!entry.engine) {
    entry.engine = engines_.For(entry.session.config, entry.scenario);
  }
  try {
    entry.engine->Run(entry.session);
  } catch (const Error &e) {
    Persist(entry);
    spdlog::warn("session {}: {}", entry.session.id, e.what());
    throw SessionError(e, entry.session.id);
  }
  Persist(entry);
}

Json SessionService::Create(const Json &request) {
  if (!request.is_object()) BadRequest("request body must be a JSON object");

  auto scenario_name = StringField(request, "scenario");
  std::shared_ptr<const agents::ScriptedScenario> scenario;
  if (scenario_name) scenario = engines_.catalog().Get(*scenario_name);

  core::Query query;
  if (auto text = StringField(request, "query")) {
    query.text = *text;
  } else if (scenario && scenario->query) {
    query.text = *scenario->query;
  }
  if (Trim(query.text).empty()) BadRequest("query text is empty");
  if (auto tag = StringField(request, "domain_tag")) {
    query.domain_tag = *tag;
  } else if (scenario) {
    query.domain_tag = scenario->domain_tag;
  }
  if (request.contains("constraints")) {
    try {
      query.constraints =
          request["constraints"].get<std::vector<std::string>>();
    } catch (const Json::exception &) {
      BadRequest("'constraints' must be a list of strings");
    }
  }

  core::EngineConfig config = config_.engine;
  if (request.contains("config")) {
    if (!request["config"].is_object()) BadRequest("'config' must be an object");
    try {
      from_json(request["config"], config);
    } catch (const Json::exception &e) {
      BadRequest(std::string("config: ") + e.what());
    }
  }
  if (scenario && !(request.contains("config") &&
                    request["config"].contains("backend"))) {
    config.backend = "scripted";
  }
  config.Validate();

  bool vanilla = false;
  if (request.contains("vanilla")) {
    if (!request["vanilla"].is_boolean()) BadRequest("'vanilla' must be a boolean");
    vanilla = request["vanilla"].get<bool>();
  }

  std::string id;
  if (auto requested = StringField(request, "session_id")) {
    if (!IsValidSessionId(*requested)) BadRequest("invalid session id");
    id = *requested;
  } else {
    id = NewId();
  }
  query.id = id;

  auto engine = engines_.For(config, scenario_name);
  auto entry = std::make_shared<Entry>();
  entry->engine = engine;
  entry->scenario = scenario_name;
  std::unique_lock entry_lock(entry->mu);

  if (vanilla) {
    core::VanillaRun run = engine->RunVanilla(id, query, config);
    entry->session = std::move(run.session);
  } else {
    entry->session = engine->Create(id, query, config, scenario_name);
  }
  {
    std::lock_guard lock(mu_);
    if (sessions_.count(id) > 0 || store_.Exists(id)) {
      throw Error(ErrorCode::kWrongLayer, "session '" + id + "' already exists");
    }
    sessions_.emplace(id, entry);
  }
  Persist(*entry);
  if (!vanilla) Drive(*entry);
  return core::SessionSnapshot(entry->session);
}

Json SessionService::PostFeedback(const std::string &id, const Json &body) {
  auto entry = Find(id);
  std::lock_guard lock(entry->mu);

  core::Feedback feedback;
  try {
    feedback = body.get<core::Feedback>();
  } catch (const Json::exception &e) {
    BadRequest(std::string("feedback: ") + e.what());
  }
  feedback.Validate();
  if (feedback.session_id.empty()) feedback.session_id = id;

  const core::Session &session = entry->session;
  if (session.Closed()) {
    throw Error(ErrorCode::kSessionClosed,
                fmt::format("session {} is {}", id, core::Name(session.Status())));
  }
  if (!feedback.attempt && RepeatsLastFeedback(session, feedback)) {
    throw Error(ErrorCode::kWrongLayer,
                "feedback repeats the previous feedback for this layer");
  }

  if (!entry->engine) {
    entry->engine = engines_.For(session.config, entry->scenario);
  }
  entry->engine->ApplyFeedback(entry->session, feedback);
  Persist(*entry);
  Drive(*entry);
  return core::SessionSnapshot(entry->session);
}

Json SessionService::Advance(const std::string &id) {
  auto entry = Find(id);
  std::lock_guard lock(entry->mu);
  if (entry->session.Closed()) {
    throw Error(ErrorCode::kSessionClosed,
                fmt::format("session {} is {}", id,
                            core::Name(entry->session.Status())));
  }
  Drive(*entry);
  return core::SessionSnapshot(entry->session);
}

Json SessionService::Get(const std::string &id) const {
  auto entry = Find(id);
  std::lock_guard lock(entry->mu);
  return core::SessionSnapshot(entry->session);
}

Json SessionService::List() const {
  std::vector<std::shared_ptr<Entry>> entries;
  {
    std::lock_guard lock(mu_);
    for (const auto &[_, entry] : sessions_) entries.push_back(entry);
  }
  Json out = Json::array();
  for (const auto &entry : entries) {
    std::lock_guard lock(entry->mu);
    out.push_back(Summary(entry->session));
  }
  std::stable_sort(out.begin(), out.end(), [](const Json &a, const Json &b) {
    return a["created"].dump() < b["created"].dump();
  });
  return out;
}

Json SessionService::Trace(const std::string &id) const {
  auto entry = Find(id);
  std::lock_guard lock(entry->mu);
  return Json(entry->session.events);
}

Json SessionService::Simulate(const Json &body) {
  if (!body.is_object()) {
    throw Error(ErrorCode::kBadParameter, "request body must be a JSON object");
  }
  sim::SimConfig config = body.get<sim::SimConfig>();
  if (config.num_tasks > kMaxSimTasks) {
    throw Error(ErrorCode::kBadParameter,
                fmt::format("num_tasks is limited to {}", kMaxSimTasks));
  }

  if (!body.contains("sweep")) {
    Json out = sim::Simulate(config);
    out["config"] = config;
    out["analytic"] = sim::Analytic(config);
    return out;
  }

  if (!body["sweep"].is_string()) {
    throw Error(ErrorCode::kBadParameter, "'sweep' must be a parameter name");
  }
  auto param = sim::ParseSweepParam(body["sweep"].get<std::string>());
  std::vector<double> values;
  try {
    values = body.value("values", Json::array()).get<std::vector<double>>();
  } catch (const Json::exception &) {
    throw Error(ErrorCode::kBadParameter, "'values' must be a list of numbers");
  }
  auto rows = sim::Sweep(config, param, values);
  Json table = Json::array();
  for (const auto &row : rows) {
    table.push_back(
        {{"value", row.value}, {"simulated", row.simulated}, {"analytic", row.analytic}});
  }
  return Json{{"param", sim::Name(param)},
              {"config", config},
              {"rows", table},
              {"csv", sim::SweepCsv(param, rows)}};
}

}  // namespace layercot::service
