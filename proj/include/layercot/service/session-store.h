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

// Durable session logs: one append-only JSON-Lines file per session,
// <root>/<session-id>.jsonl, one TraceEvent per line.

#ifndef LAYERCOT_SERVICE_SESSION_STORE_H_
#define LAYERCOT_SERVICE_SESSION_STORE_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layercot/core/types.h"

namespace layercot::service {

inline constexpr std::string_view kLogExtension = ".jsonl";
inline constexpr std::string_view kQuarantineSuffix = ".quarantined";

// Session ids are 1-64 characters from [A-Za-z0-9_-].
bool IsValidSessionId(std::string_view id);

struct QuarantinedLog {
  std::string session_id;
  std::filesystem::path moved_to;
  std::string reason;
};

struct ResumeResult {
  std::vector<core::Session> sessions;
  std::vector<QuarantinedLog> quarantined;
};

class SessionStore {
 public:
  // Creates the root directory if needed. Throws Error(kIo).
  explicit SessionStore(std::filesystem::path root);

  // Appends events to the session's log and fsyncs it before returning.
  // Throws Error(kIo).
  void Append(std::string_view session_id,
              std::span<const core::TraceEvent> events) const;

  bool Exists(std::string_view session_id) const;

  // Throws Error(kNotFound) or Error(kParse).
  std::vector<core::TraceEvent> Load(std::string_view session_id) const;

  // Replays every log under the root. Logs that fail to parse or replay are
  // renamed to <name>.jsonl.quarantined and reported, never thrown.
  ResumeResult ResumeAll() const;

  std::filesystem::path PathFor(std::string_view session_id) const;
  const std::filesystem::path &root() const { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace layercot::service

#endif  // LAYERCOT_SERVICE_SESSION_STORE_H_
