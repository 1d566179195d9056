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


#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "psi/compiler.hpp"
#include "psi/config.hpp"
#include "psi/conformance.hpp"
#include "psi/error.hpp"
#include "psi/manifest.hpp"
#include "psi/transport.hpp"
#include "psi/validator.hpp"

#ifndef PSI_DEFAULT_CONFIG
#define PSI_DEFAULT_CONFIG "data/config/full.json"
#endif

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw psi::Error(psi::ErrorCode::kResolutionIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

psi::ResolutionContext context_for(const std::string& schema_root) {
  auto remote = std::make_shared<psi::TransportSchemaFetcher>(std::make_shared<psi::HttpClientTransport>());
  return psi::ResolutionContext(std::make_shared<psi::PredefinedFetcher>(schema_root, remote), schema_root);
}

int serve(const std::string& config_path) {
  psi::ServiceConfig config = psi::load_config(config_path);
  psi::Deployment deployment(config);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  deployment.start();
  spdlog::info("serving {} ({}) on port {}", deployment.base_uri(), psi::profile_name(config.profile),
               deployment.port());
  int received = 0;
  sigwait(&signals, &received);
  spdlog::info("stopping");
  deployment.stop();
  return kPass;
}

int compile_schema(const std::string& path, const std::string& schema_root) {
  psi::Value compiled = psi::compile(psi::parse_json(read_file(path)), context_for(schema_root));
  std::cout << psi::serialize_json_pretty(compiled) << "\n";
  return kPass;
}

int validate_value(const std::string& schema_path, const std::string& value_path, const std::string& schema_root) {
  psi::Value schema = psi::parse_json(read_file(schema_path));
  psi::Value value = psi::parse_json(read_file(value_path));
  psi::ValidationOptions options;
  options.resolver = std::make_shared<psi::TransportMediaTypeResolver>(std::make_shared<psi::HttpClientTransport>());
  psi::ValidationOutcome outcome = psi::validate_psi(value, schema, context_for(schema_root), options);
  if (outcome.valid()) {
    std::cout << "valid\n";
    return kPass;
  }
  std::cout << outcome.describe() << "\n";
  return kFail;
}

int conformance(const std::string& entry, bool self_host, const std::string& config_path, bool json) {
  std::unique_ptr<psi::Deployment> local;
  std::string target = entry;
  if (self_host) {
    psi::ServiceConfig config = psi::load_config(config_path);
    config.address = "127.0.0.1:0";
    config.base_uri.clear();
    config.journal.clear();
    local = std::make_unique<psi::Deployment>(config);
    local->start();
    target = local->base_uri();
  }
  if (target.empty()) throw CLI::ValidationError("entry", "an entry URI or --self-host is required");
  psi::ConformanceReport report = psi::run_conformance(target);
  if (json) {
    std::cout << psi::serialize_json_pretty(report.to_json()) << "\n";
  } else {
    std::cout << report.to_text();
  }
  return report.ok() ? kPass : kFail;
}

int ingest_check(const std::string& manifest_path, bool data_uri) {
  psi::Manifest manifest = psi::load_manifest(manifest_path);
  psi::Table table = psi::ingest(manifest, data_uri);
  std::cout << manifest.name << ": " << table.rows.size() << " rows, " << table.columns.size() << " columns, "
            << manifest.attributes.size() << " attributes\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PSI inference service and schema tools"};
  app.require_subcommand(1);
  std::string schema_root(psi::kDefaultSchemaRoot);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string config_path;
  serve_cmd->add_option("--config", config_path, "Service config file")->required()->check(CLI::ExistingFile);

  auto* schema_cmd = app.add_subcommand("schema", "Compile and validate PSI schemas");
  schema_cmd->require_subcommand(1);
  schema_cmd->add_option("--schema-root", schema_root, "URI that predefined schema names resolve under");
  auto* compile_cmd = schema_cmd->add_subcommand("compile", "Print the compiled form of a PSI schema");
  std::string schema_file, value_file;
  compile_cmd->add_option("file", schema_file, "PSI schema (JSON)")->required()->check(CLI::ExistingFile);
  auto* validate_cmd = schema_cmd->add_subcommand("validate", "Validate a value against a PSI schema");
  validate_cmd->add_option("schema", schema_file, "PSI schema (JSON)")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("value", value_file, "Value (JSON)")->required()->check(CLI::ExistingFile);

  auto* conf_cmd = app.add_subcommand("conformance", "Replay the iris walkthrough against a service");
  std::string entry;
  bool self_host = false, json = false;
  std::string conf_config = PSI_DEFAULT_CONFIG;
  conf_cmd->add_option("entry", entry, "Entry point URI of the service");
  conf_cmd->add_flag("--self-host", self_host, "Start a local service on a free port and test it");
  conf_cmd->add_option("--config", conf_config, "Config for --self-host")->check(CLI::ExistingFile);
  conf_cmd->add_flag("--json", json, "Print the report as JSON");

  auto* ingest_cmd = app.add_subcommand("ingest", "Check that a relation manifest and its CSV ingest");
  std::string manifest_path;
  bool check = false, data_uri = false;
  ingest_cmd->add_option("--manifest", manifest_path, "Relation manifest")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_flag("--check", check, "Dry run: parse and type every row")->required();
  ingest_cmd->add_flag("--data-uri", data_uri, "Inline rich-value files as data URIs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*serve_cmd) return serve(config_path);
    if (*compile_cmd) return compile_schema(schema_file, schema_root);
    if (*validate_cmd) return validate_value(schema_file, value_file, schema_root);
    if (*conf_cmd) return conformance(entry, self_host, conf_config, json);
    if (*ingest_cmd) return ingest_check(manifest_path, data_uri);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const psi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.detail().empty()) std::cerr << e.detail() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
