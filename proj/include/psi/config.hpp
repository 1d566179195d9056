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


#ifndef PSI_CONFIG_HPP
#define PSI_CONFIG_HPP

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psi/server.hpp"
#include "psi/service.hpp"
#include "psi/value.hpp"

namespace psi {

struct PretrainedConfig {
  std::string name;
  std::string description;
  std::filesystem::path manifest;
  std::vector<std::string> source;  // feature columns
  std::string target;               // label column
  std::size_t k = 1;
};

struct ServiceConfig {
  std::string address = "127.0.0.1:8080";  // host:port, port 0 for any
  std::string base_uri;                     // defaults to http://<address>
  Profile profile = Profile::kFull;
  Namespaces namespaces;
  std::vector<std::filesystem::path> manifests;
  std::filesystem::path journal;
  Value related_services = Value::array();
  std::optional<DelayedLearnerOptions> delayed_learner;
  bool immutable_predictors = false;
  std::vector<PretrainedConfig> pretrained;
  std::chrono::milliseconds remote_timeout{10000};
  bool inline_rich_values = false;
};

/// Relative paths resolve against `base_dir`. Throws Error(kBadRequest).
ServiceConfig parse_config(const Value& doc, const std::filesystem::path& base_dir);
/// Reads a config file; the PSI_ADDR environment variable overrides `address`.
ServiceConfig load_config(const std::filesystem::path& path);

/// "host:port" -> (host, port). Throws Error(kBadRequest).
std::pair<std::string, int> split_address(const std::string& address);

/// Builds a service from `config` at `base_uri`: ingests manifests, installs
/// pre-trained predictors and replays the journal.
std::unique_ptr<Service> build_service(const ServiceConfig& config, const std::string& base_uri,
                                       std::shared_ptr<LocalTransport> transport = nullptr);

/// A service bound to a listening socket.
class Deployment {
 public:
  /// Binds first so that an ephemeral port can appear in the base URI.
  explicit Deployment(const ServiceConfig& config, std::shared_ptr<LocalTransport> transport = nullptr);
  ~Deployment();

  Service& service() { return *service_; }
  int port() const { return port_; }
  const std::string& base_uri() const { return service_->base_uri(); }

  void serve() { server_.serve(); }
  void start() { server_.start(); }
  void stop() { server_.stop(); }

 private:
  HttpServer server_;
  int port_ = 0;
  std::unique_ptr<Service> service_;
};

}  // namespace psi

#endif  // PSI_CONFIG_HPP
