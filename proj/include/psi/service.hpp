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


#ifndef PSI_SERVICE_HPP
#define PSI_SERVICE_HPP

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psi/compiler.hpp"
#include "psi/manifest.hpp"
#include "psi/transport.hpp"
#include "psi/validator.hpp"
#include "psi/value.hpp"

namespace psi {

struct Namespaces {
  std::string relations = "/data";
  std::string schema = "/schema";
  std::string learners = "/learn";
  std::string predictors = "/infer";
  std::string transformers = "/transform";
};

enum class Profile { kFull, kDataOnly, kPredictorOnly };

/// "full", "data-only" or "predictor-only"; throws Error(kBadRequest).
Profile parse_profile(std::string_view name);
std::string profile_name(Profile profile);

struct DelayedLearnerOptions {
  std::string name = "delayed";
  std::chrono::milliseconds delay{200};
};

using Clock = std::function<std::chrono::system_clock::time_point()>;

struct ServiceOptions {
  std::string base_uri = "http://localhost:8080";
  Namespaces namespaces;
  Profile profile = Profile::kFull;
  Value related_services = Value::array();  // LDOs for the entry point
  bool immutable_predictors = false;
  std::optional<DelayedLearnerOptions> delayed_learner;
  Clock clock;  // system clock when empty
  /// Requests to other services go through this transport; the service
  /// mounts itself on it. A LocalTransport over HTTP is created when null.
  std::shared_ptr<LocalTransport> transport;
  /// Checks rich values given as http(s) URIs; defaults to one that asks
  /// the transport.
  std::shared_ptr<MediaTypeResolver> media_resolver;
  std::filesystem::path journal;  // empty: no persistence
};

/// A kNN predictor built directly from a table, without a learner.
struct PretrainedSpec {
  std::string name;
  std::string description;
  std::vector<std::string> source_columns;
  std::string target_column;
  std::size_t k = 1;
};

/// A PSI service: the resource registry plus the wire protocol. Thread safe.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Answers one request. Never throws; failures become PSI error bodies.
  HttpResponse handle(const HttpRequest& request);

  /// Registers a relation, one attribute per manifest attribute and their
  /// sub-attributes. Returns the relation URI.
  std::string add_relation(const Manifest& manifest, Table table);

  /// Registers a hand-built kNN predictor. Returns its URI.
  std::string add_pretrained(const PretrainedSpec& spec, const Table& table);

  /// Replays the journal, then starts appending to it.
  void open_journal();

  const std::string& base_uri() const;
  std::string collection_uri(std::string_view collection) const;
  const ResolutionContext& resolution_context() const;
  std::shared_ptr<LocalTransport> transport() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

/// "2013-08-02T08:07Z"
std::string iso_minute(std::chrono::system_clock::time_point t);
/// "20130802180742606"
std::string compact_millis(std::chrono::system_clock::time_point t);

}  // namespace psi

#endif  // PSI_SERVICE_HPP
