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


#include "psi/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "psi/error.hpp"
#include "psi/manifest.hpp"

namespace psi {
namespace {

namespace fs = std::filesystem;

std::string text(const Value& doc, const char* key, const std::string& fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_string()) throw Error(ErrorCode::kBadRequest, std::string("config: ") + key + " must be a string");
  return doc[key].get<std::string>();
}

bool flag(const Value& doc, const char* key) {
  if (!doc.contains(key)) return false;
  if (!doc[key].is_boolean()) throw Error(ErrorCode::kBadRequest, std::string("config: ") + key + " must be a boolean");
  return doc[key].get<bool>();
}

}  // namespace

std::pair<std::string, int> split_address(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw Error(ErrorCode::kBadRequest, "address must look like host:port, got \"" + address + "\"");
  }
  int port = -1;
  const char* first = address.data() + colon + 1;
  const char* last = address.data() + address.size();
  auto [end, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || end != last || port < 0 || port > 65535) {
    throw Error(ErrorCode::kBadRequest, "bad port in address \"" + address + "\"");
  }
  return {address.substr(0, colon), port};
}

ServiceConfig parse_config(const Value& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw Error(ErrorCode::kBadRequest, "config must be a JSON object");
  ServiceConfig c;
  c.address = text(doc, "address", c.address);
  split_address(c.address);
  c.base_uri = text(doc, "base_uri", "");
  c.profile = parse_profile(text(doc, "profile", "full"));
  if (doc.contains("namespaces")) {
    const Value& ns = doc["namespaces"];
    c.namespaces.relations = text(ns, "relations", c.namespaces.relations);
    c.namespaces.schema = text(ns, "schema", c.namespaces.schema);
    c.namespaces.learners = text(ns, "learners", c.namespaces.learners);
    c.namespaces.predictors = text(ns, "predictors", c.namespaces.predictors);
    c.namespaces.transformers = text(ns, "transformers", c.namespaces.transformers);
  }
  if (doc.contains("manifests")) {
    for (const auto& m : doc["manifests"]) c.manifests.push_back(base_dir / m.get<std::string>());
  }
  if (doc.contains("journal")) c.journal = base_dir / text(doc, "journal", "");
  if (doc.contains("related_services")) {
    if (!doc["related_services"].is_array()) throw Error(ErrorCode::kBadRequest, "config: related_services must be an array");
    for (const auto& ldo : doc["related_services"]) {
      if (!ldo.is_object() || !ldo.contains("rel") || !ldo.contains("href")) {
        throw Error(ErrorCode::kBadRequest, "config: every related service needs rel and href");
      }
    }
    c.related_services = doc["related_services"];
  }
  if (doc.contains("delayed_learner")) {
    const Value& d = doc["delayed_learner"];
    DelayedLearnerOptions options;
    options.name = text(d, "name", options.name);
    if (d.contains("delay_ms")) options.delay = std::chrono::milliseconds(d["delay_ms"].get<std::int64_t>());
    c.delayed_learner = options;
  }
  c.immutable_predictors = flag(doc, "immutable_predictors");
  c.inline_rich_values = flag(doc, "inline_rich_values");
  if (doc.contains("remote_timeout_ms")) {
    c.remote_timeout = std::chrono::milliseconds(doc["remote_timeout_ms"].get<std::int64_t>());
  }
  if (doc.contains("pretrained")) {
    for (const auto& p : doc["pretrained"]) {
      PretrainedConfig pc;
      pc.name = text(p, "name", "");
      pc.description = text(p, "description", "");
      pc.manifest = base_dir / text(p, "manifest", "");
      pc.target = text(p, "target", "");
      if (p.contains("k")) pc.k = p["k"].get<std::size_t>();
      if (p.contains("source")) {
        for (const auto& s : p["source"]) pc.source.push_back(s.get<std::string>());
      }
      if (pc.name.empty() || pc.target.empty() || pc.source.empty()) {
        throw Error(ErrorCode::kBadRequest, "config: pretrained entries need name, source and target");
      }
      c.pretrained.push_back(std::move(pc));
    }
  }
  return c;
}

ServiceConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kResolutionIo, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  ServiceConfig c = parse_config(parse_json(buf.str()), path.parent_path());
  if (const char* addr = std::getenv("PSI_ADDR"); addr != nullptr && *addr != '\0') {
    split_address(addr);
    c.address = addr;
  }
  return c;
}

std::unique_ptr<Service> build_service(const ServiceConfig& config, const std::string& base_uri,
                                       std::shared_ptr<LocalTransport> transport) {
  ServiceOptions options;
  options.base_uri = base_uri;
  options.namespaces = config.namespaces;
  options.profile = config.profile;
  options.related_services = config.related_services;
  options.immutable_predictors = config.immutable_predictors;
  options.delayed_learner = config.delayed_learner;
  options.journal = config.journal;
  options.transport = transport ? transport
                                : std::make_shared<LocalTransport>(
                                      std::make_shared<HttpClientTransport>(config.remote_timeout));
  auto service = std::make_unique<Service>(std::move(options));
  if (config.profile != Profile::kPredictorOnly) {
    for (const auto& path : config.manifests) {
      Manifest manifest = load_manifest(path);
      service->add_relation(manifest, ingest(manifest, config.inline_rich_values));
    }
  }
  if (config.profile != Profile::kDataOnly) {
    for (const auto& p : config.pretrained) {
      Manifest manifest = load_manifest(p.manifest);
      PretrainedSpec spec{p.name, p.description, p.source, p.target, p.k};
      service->add_pretrained(spec, ingest(manifest, config.inline_rich_values));
    }
  }
  service->open_journal();
  return service;
}

Deployment::Deployment(const ServiceConfig& config, std::shared_ptr<LocalTransport> transport) {
  auto [host, port] = split_address(config.address);
  port_ = server_.bind(host, port);
  std::string base = config.base_uri;
  if (base.empty()) base = "http://" + (host == "0.0.0.0" ? std::string("127.0.0.1") : host) + ":" + std::to_string(port_);
  service_ = build_service(config, base, std::move(transport));
  server_.attach(*service_);
}

Deployment::~Deployment() { server_.stop(); }

}  // namespace psi
