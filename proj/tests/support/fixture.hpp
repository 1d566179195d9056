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


#ifndef PSI_TESTS_FIXTURE_HPP
#define PSI_TESTS_FIXTURE_HPP

#include <atomic>
#include <chrono>
#include <memory>
#include <string>

#include "psi/manifest.hpp"
#include "psi/service.hpp"
#include "psi/transport.hpp"
#include "psi/value.hpp"

#ifndef PSI_DATA_DIR
#error "PSI_DATA_DIR must point at the data directory"
#endif

namespace testing_support {

inline std::string data_path(const std::string& relative) { return std::string(PSI_DATA_DIR) + "/" + relative; }

/// Settable clock starting at 2013-08-02T08:07:42.606Z.
class ManualClock {
 public:
  using time_point = std::chrono::system_clock::time_point;

  ManualClock() : ms_(1375430862606) {}
  time_point now() const { return time_point(std::chrono::milliseconds(ms_.load())); }
  void advance(std::chrono::milliseconds d) { ms_ += d.count(); }
  psi::Clock fn() { return [this] { return now(); }; }

 private:
  std::atomic<long long> ms_;
};

struct Reply {
  int status = 0;
  psi::Value body;
  std::string location;
};

/// Sends requests through an in-process transport; nothing touches the network.
class Client {
 public:
  explicit Client(std::shared_ptr<psi::Transport> transport) : transport_(std::move(transport)) {}

  Reply send(const std::string& method, const std::string& uri, const std::string& body = "") {
    psi::HttpResponse r = transport_->send({method, uri, body});
    Reply out;
    out.status = r.status;
    out.location = r.location;
    if (!r.body.empty()) out.body = psi::parse_json(r.body);
    return out;
  }
  Reply get(const std::string& uri) { return send("GET", uri); }
  Reply post(const std::string& uri, const psi::Value& body) { return send("POST", uri, psi::serialize_json(body)); }
  Reply del(const std::string& uri) { return send("DELETE", uri); }

 private:
  std::shared_ptr<psi::Transport> transport_;
};

/// The iris service at http://example.org, mounted on a network-free transport.
struct IrisService {
  explicit IrisService(psi::ServiceOptions options = {}) : transport(std::make_shared<psi::LocalTransport>()) {
    if (options.base_uri == psi::ServiceOptions{}.base_uri) options.base_uri = base;
    options.transport = transport;
    if (!options.clock) options.clock = clock.fn();
    service = std::make_unique<psi::Service>(std::move(options));
    psi::Manifest m = psi::load_manifest(data_path("iris/iris.json"));
    service->add_relation(m, psi::ingest(m));
  }

  std::string uri(const std::string& path) const { return base + path; }

  const std::string base = "http://example.org";
  ManualClock clock;
  std::shared_ptr<psi::LocalTransport> transport;
  std::unique_ptr<psi::Service> service;
  Client client{transport};
};

}  // namespace testing_support

#endif  // PSI_TESTS_FIXTURE_HPP
