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


#ifndef PSI_SERVER_HPP
#define PSI_SERVER_HPP

#include <memory>
#include <string>
#include <thread>

namespace psi {

class Service;

/// HTTP/1.1 front end for a Service.
class HttpServer {
 public:
  HttpServer();
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port; port 0 picks a free one. Returns the bound port.
  /// Throws Error(kResolutionIo) when binding fails.
  int bind(const std::string& host, int port);

  /// Routes every request to `service`. Call before serving.
  void attach(Service& service);

  /// Serves until stop().
  void serve();
  /// Serves on a background thread.
  void start();
  void stop();

 private:
  struct State;
  std::unique_ptr<State> state_;
  std::thread thread_;
};

}  // namespace psi

#endif  // PSI_SERVER_HPP
