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

#include "layercot/service/http-server.h"

#include <charconv>

#include "httplib.h"
#include "spdlog/spdlog.h"

namespace layercot::service {

using core::Json;

namespace {

constexpr char kJson[] = "application/json";

void Reply(httplib::Response &res, int status, const Json &body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void ReplyError(httplib::Response &res, int status, ErrorCode code,
                const std::string &message, const std::string &session_id = "") {
  Json body{{"error", {{"code", ErrorCodeName(code)}, {"message", message}}}};
  if (!session_id.empty()) body["session_id"] = session_id;
  Reply(res, status, body);
}

Json ParseBody(const httplib::Request &req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("request body is not JSON: ") + e.what());
  }
}

// Wraps a handler with the error mapping.
template <typename F>
httplib::Server::Handler Guard(F handler, int ok_status = 200) {
  return [handler, ok_status](const httplib::Request &req,
                              httplib::Response &res) {
    try {
      Reply(res, ok_status, handler(req));
    } catch (const SessionError &e) {
      ReplyError(res, HttpStatusFor(e.code()), e.code(), e.what(), e.session_id());
    } catch (const Error &e) {
      // Session routes capture the id as the first match.
      const std::string id = req.matches.size() > 1 ? req.matches[1].str() : "";
      ReplyError(res, HttpStatusFor(e.code()), e.code(), e.what(), id);
    } catch (const Json::exception &e) {
      ReplyError(res, 400, ErrorCode::kInvalidArgument, e.what());
    } catch (const std::exception &e) {
      spdlog::error("{} {}: {}", req.method, req.path, e.what());
      ReplyError(res, 500, ErrorCode::kIo, e.what());
    }
  };
}

}  // namespace

std::pair<std::string, int> ParseAddress(const std::string &addr) {
  std::string host = "0.0.0.0";
  std::string port_text = addr;
  if (auto colon = addr.rfind(':'); colon != std::string::npos) {
    host = addr.substr(0, colon);
    port_text = addr.substr(colon + 1);
    if (host.empty()) host = "0.0.0.0";
  }
  int port = -1;
  auto [ptr, ec] = std::from_chars(port_text.data(),
                                   port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() ||
      port < 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "bad address '" + addr + "'");
  }
  return {host, port};
}

HttpServer::HttpServer(SessionService &service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto &s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(.*)", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });

  s.Get("/healthz", Guard([](const httplib::Request &) {
          return Json{{"status", "ok"}};
        }));
  s.Post("/sessions", Guard(
                          [this](const httplib::Request &req) {
                            return service_.Create(ParseBody(req));
                          },
                          201));
  s.Get("/sessions", Guard([this](const httplib::Request &) {
          return service_.List();
        }));
  s.Get(R"(/sessions/([A-Za-z0-9_-]+))",
        Guard([this](const httplib::Request &req) {
          return service_.Get(req.matches[1]);
        }));
  s.Get(R"(/sessions/([A-Za-z0-9_-]+)/trace)",
        Guard([this](const httplib::Request &req) {
          return service_.Trace(req.matches[1]);
        }));
  s.Post(R"(/sessions/([A-Za-z0-9_-]+)/feedback)",
         Guard([this](const httplib::Request &req) {
           return service_.PostFeedback(req.matches[1], ParseBody(req));
         }));
  s.Post(R"(/sessions/([A-Za-z0-9_-]+)/advance)",
         Guard([this](const httplib::Request &req) {
           return service_.Advance(req.matches[1]);
         }));
  s.Post("/simulate", Guard([](const httplib::Request &req) {
           return SessionService::Simulate(ParseBody(req));
         }));

  s.set_error_handler([](const httplib::Request &, httplib::Response &res) {
    if (!res.body.empty()) return;
    ReplyError(res, res.status,
               res.status == 404 ? ErrorCode::kNotFound
                                 : ErrorCode::kInvalidArgument,
               httplib::status_message(res.status));
  });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string &host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::Serve() { return server_->listen_after_bind(); }

void HttpServer::Stop() {
  if (server_) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

}  // namespace layercot::service
