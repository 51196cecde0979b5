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

// Transport-neutral session operations behind the HTTP API. Requests and
// responses are JSON documents; failures are Errors whose codes the
// transport maps to statuses.
//
// Every mutation persists its new events before it returns, including the
// events written before a backend failure, so a session can always be
// resumed from its log.

#ifndef LAYERCOT_SERVICE_SESSION_SERVICE_H_
#define LAYERCOT_SERVICE_SESSION_SERVICE_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "layercot/core/engine.h"
#include "layercot/core/error.h"
#include "layercot/core/types.h"
#include "layercot/service/config.h"
#include "layercot/service/session-store.h"

namespace layercot::service {

// A failure that left a persisted session behind (e.g. a backend error
// after creation). The session can be advanced again later.
class SessionError : public Error {
 public:
  SessionError(const Error &cause, std::string session_id)
      : Error(cause.code(), cause.what()), session_id_(std::move(session_id)) {}

  const std::string &session_id() const { return session_id_; }

 private:
  std::string session_id_;
};

// HTTP status for an error code.
int HttpStatusFor(ErrorCode code);

class SessionService {
 public:
  // Loads every log under config.storage_root (see ResumeAll).
  explicit SessionService(AppConfig config,
                          core::Clock clock = core::SystemClock());

  // Request: {"query": text, "domain_tag"?, "config"?: EngineConfig
  // overrides, "scenario"?, "vanilla"?: bool, "session_id"?}. With a
  // scenario the query may be omitted and defaults to the scenario's.
  // The session is planned and run to its first blocking point. Returns the
  // snapshot.
  core::Json Create(const core::Json &request);

  // Applies feedback, then runs to the next blocking point. Repeating the
  // previous feedback for the same layer without an attempt number is
  // refused with kWrongLayer.
  core::Json PostFeedback(const std::string &id, const core::Json &body);

  // Runs a session that stopped on a backend failure.
  core::Json Advance(const std::string &id);

  core::Json Get(const std::string &id) const;
  core::Json List() const;
  core::Json Trace(const std::string &id) const;

  // Body: SimConfig fields, optionally "sweep": "p"|"q"|"N"|"R" with
  // "values": [...]. Stateless.
  static core::Json Simulate(const core::Json &body);

  // Reloads logs not yet in memory. Returns the number of sessions loaded.
  int ResumeAll();

  const SessionStore &store() const { return store_; }
  EngineFactory &engines() { return engines_; }

 private:
  struct Entry {
    std::mutex mu;
    core::Session session;
    std::shared_ptr<const core::Engine> engine;
    size_t persisted = 0;
    std::optional<std::string> scenario;
  };

  std::shared_ptr<Entry> Find(const std::string &id) const;
  std::shared_ptr<const core::Engine> EngineFor(const core::Session &session);
  void Persist(Entry &entry);
  // Runs the engine until it blocks, persisting on the way out.
  void Drive(Entry &entry);
  std::string NewId();

  AppConfig config_;
  core::Clock clock_;
  EngineFactory engines_;
  SessionStore store_;

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace layercot::service

#endif  // LAYERCOT_SERVICE_SESSION_SERVICE_H_
