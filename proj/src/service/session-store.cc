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

#include "layercot/service/session-store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "layercot/core/error.h"
#include "layercot/core/trace.h"
#include "spdlog/spdlog.h"

namespace layercot::service {
namespace {

[[noreturn]] void IoError(const std::string &what,
                          const std::filesystem::path &path) {
  throw Error(ErrorCode::kIo,
              what + " " + path.string() + ": " + std::strerror(errno));
}

void SyncDirectory(const std::filesystem::path &dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string ReadAll(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

bool IsValidSessionId(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

SessionStore::SessionStore(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec || !std::filesystem::is_directory(root_)) {
    throw Error(ErrorCode::kIo, "cannot create storage root " + root_.string());
  }
}

std::filesystem::path SessionStore::PathFor(std::string_view session_id) const {
  if (!IsValidSessionId(session_id)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid session id '" + std::string(session_id) + "'");
  }
  return root_ / (std::string(session_id) + std::string(kLogExtension));
}

void SessionStore::Append(std::string_view session_id,
                          std::span<const core::TraceEvent> events) const {
  const std::filesystem::path path = PathFor(session_id);
  if (events.empty()) return;
  const bool created = !std::filesystem::exists(path);
  const std::string data = core::ToJsonLines(events);

  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) IoError("cannot open", path);
  size_t written = 0;
  while (written < data.size()) {
    ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      IoError("cannot write", path);
    }
    written += static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    IoError("cannot sync", path);
  }
  ::close(fd);
  if (created) SyncDirectory(root_);
}

bool SessionStore::Exists(std::string_view session_id) const {
  return IsValidSessionId(session_id) &&
         std::filesystem::exists(PathFor(session_id));
}

std::vector<core::TraceEvent> SessionStore::Load(
    std::string_view session_id) const {
  if (!Exists(session_id)) {
    throw Error(ErrorCode::kNotFound,
                "no log for session '" + std::string(session_id) + "'");
  }
  return core::ParseJsonLines(ReadAll(PathFor(session_id)));
}

ResumeResult SessionStore::ResumeAll() const {
  std::vector<std::filesystem::path> logs;
  for (const auto &entry : std::filesystem::directory_iterator(root_)) {
    if (entry.is_regular_file() && entry.path().extension() == kLogExtension) {
      logs.push_back(entry.path());
    }
  }
  std::sort(logs.begin(), logs.end());

  ResumeResult result;
  for (const auto &path : logs) {
    const std::string id = path.stem().string();
    std::string reason;
    try {
      if (!IsValidSessionId(id)) {
        throw Error(ErrorCode::kInvalidArgument, "invalid session id");
      }
      core::Session session = core::Replay(core::ParseJsonLines(ReadAll(path)));
      if (session.id != id) {
        throw Error(ErrorCode::kInvalidArgument,
                    "log belongs to session '" + session.id + "'");
      }
      result.sessions.push_back(std::move(session));
      continue;
    } catch (const std::exception &e) {
      reason = e.what();
    }

    std::filesystem::path moved = path;
    moved += std::string(kQuarantineSuffix);
    std::error_code ec;
    std::filesystem::rename(path, moved, ec);
    if (ec) {
      spdlog::error("cannot quarantine {}: {}", path.string(), ec.message());
      moved.clear();
    } else {
      spdlog::warn("quarantined session log {}: {}", path.string(), reason);
    }
    result.quarantined.push_back({id, moved, reason});
  }
  return result;
}

}  // namespace layercot::service
