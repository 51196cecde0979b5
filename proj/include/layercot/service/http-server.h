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

// JSON over HTTP for a SessionService:
//
//   POST /sessions                  create and run to the first stop
//   GET  /sessions                  summaries
//   GET  /sessions/{id}             snapshot
//   POST /sessions/{id}/feedback    apply feedback and run on
//   POST /sessions/{id}/advance     retry after a backend failure
//   GET  /sessions/{id}/trace       event list
//   POST /simulate                  simulator run or sweep
//   GET  /healthz
//
// Errors are {"error": {"code": ..., "message": ...}} plus "session_id" when
// a session was left behind.

#ifndef LAYERCOT_SERVICE_HTTP_SERVER_H_
#define LAYERCOT_SERVICE_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "layercot/service/session-service.h"

namespace httplib {
class Server;
}

namespace layercot::service {

class HttpServer {
 public:
  explicit HttpServer(SessionService &service);
  ~HttpServer();

  // Binds host:port; port 0 picks a free port. Returns the bound port, or
  // -1 on failure.
  int Bind(const std::string &host, int port);
  // Serves until Stop. Call after Bind.
  bool Serve();
  void Stop();
  bool running() const;

 private:
  SessionService &service_;
  std::unique_ptr<httplib::Server> server_;
};

// Splits "host:port"; a bare port binds 0.0.0.0. Throws kInvalidArgument.
std::pair<std::string, int> ParseAddress(const std::string &addr);

}  // namespace layercot::service

#endif  // LAYERCOT_SERVICE_HTTP_SERVER_H_
