// Copyright 2026 The PSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "psi/server.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "psi/error.hpp"
#include "psi/service.hpp"
#include "psi/uri.hpp"

namespace psi {

struct HttpServer::State {
  httplib::Server server;
  bool bound = false;
};

HttpServer::HttpServer() : state_(std::make_unique<State>()) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? state_->server.bind_to_any_port(host) : (state_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::kResolutionIo, "cannot bind " + host + ":" + std::to_string(port));
  state_->bound = true;
  return bound;
}

void HttpServer::attach(Service& service) {
  std::string origin = split_uri(service.base_uri()).origin();
  auto handler = [&service, origin](const httplib::Request& req, httplib::Response& res) {
    HttpResponse out = service.handle({req.method, origin + req.target, req.body});
    res.status = out.status;
    if (!out.location.empty()) res.set_header("Location", out.location);
    res.set_content(out.body, "application/json");
    spdlog::debug("{} {} -> {}", req.method, req.target, out.status);
  };
  auto& s = state_->server;
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Delete(".*", handler);
  s.Put(".*", handler);
  s.Patch(".*", handler);
  s.Options(".*", handler);
}

void HttpServer::serve() {
  if (!state_->bound) throw Error(ErrorCode::kInternal, "server is not bound");
  state_->server.listen_after_bind();
}

void HttpServer::start() {
  thread_ = std::thread([this] { serve(); });
  state_->server.wait_until_ready();
}

void HttpServer::stop() {
  state_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace psi
