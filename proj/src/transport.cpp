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


#include "psi/transport.hpp"

#include <httplib.h>

#include "psi/error.hpp"
#include "psi/uri.hpp"

namespace psi {

HttpClientTransport::HttpClientTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

HttpResponse HttpClientTransport::send(const HttpRequest& request) {
  UriParts parts = split_uri(request.uri);
  if (parts.scheme != "http" && parts.scheme != "https") {
    throw Error(ErrorCode::kResolutionIo, "unsupported scheme in " + request.uri);
  }
  httplib::Client client(parts.origin());
  client.set_url_encode(false);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);

  httplib::Request req;
  req.method = request.method;
  req.path = parts.target();
  req.set_header("Accept", "application/json");
  if (!request.body.empty() || request.method == "POST") {
    req.body = request.body;
    req.set_header("Content-Type", "application/json");
  }
  httplib::Result result = client.send(req);
  if (!result) {
    throw Error(ErrorCode::kResolutionIo,
                "cannot reach " + request.uri + ": " + httplib::to_string(result.error()));
  }
  HttpResponse out;
  out.status = result->status;
  out.body = result->body;
  out.location = result->get_header_value("Location");
  out.content_type = result->get_header_value("Content-Type");
  return out;
}

LocalTransport::LocalTransport(std::shared_ptr<Transport> fallback) : fallback_(std::move(fallback)) {}

void LocalTransport::mount(const std::string& origin, Handler handler) {
  std::unique_lock lock(mutex_);
  handlers_[split_uri(origin).origin()] = std::move(handler);
}

void LocalTransport::unmount(const std::string& origin) {
  std::unique_lock lock(mutex_);
  handlers_.erase(split_uri(origin).origin());
}

HttpResponse LocalTransport::send(const HttpRequest& request) {
  Handler handler;
  {
    std::shared_lock lock(mutex_);
    auto it = handlers_.find(split_uri(request.uri).origin());
    if (it != handlers_.end()) handler = it->second;
  }
  if (handler) return handler(request);
  if (fallback_) return fallback_->send(request);
  throw Error(ErrorCode::kResolutionIo, "no route to " + request.uri);
}

Value get_json(Transport& transport, const std::string& uri) {
  HttpResponse response = transport.send({"GET", uri, ""});
  if (response.status < 200 || response.status > 299) {
    std::string message = "GET " + uri + " returned " + std::to_string(response.status);
    try {
      Value body = parse_json(response.body);
      if (body.is_object() && body.contains("message") && body["message"].is_string()) {
        message += ": " + body["message"].get<std::string>();
      }
    } catch (const Error&) {
    }
    throw Error(ErrorCode::kResolutionIo, message);
  }
  try {
    return parse_json(response.body);
  } catch (const Error& e) {
    throw Error(ErrorCode::kResolutionIo, "GET " + uri + " returned malformed JSON: " + e.what());
  }
}

TransportSchemaFetcher::TransportSchemaFetcher(std::shared_ptr<Transport> transport)
    : transport_(std::move(transport)) {}

Value TransportSchemaFetcher::fetch(const std::string& address, const Value& params) const {
  std::string uri = address;
  if (params.is_object() && !params.empty()) {
    QueryPairs pairs;
    for (const auto& [key, value] : params.items()) {
      pairs.emplace_back(key, value.is_string() ? value.get<std::string>() : serialize_json(value));
    }
    uri = append_query(uri, encode_query(pairs));
  }
  return get_json(*transport_, uri);
}

TransportMediaTypeResolver::TransportMediaTypeResolver(std::shared_ptr<Transport> transport)
    : transport_(std::move(transport)) {}

std::string TransportMediaTypeResolver::content_type(const std::string& uri) const {
  HttpResponse response = transport_->send({"HEAD", uri, ""});
  if (response.status == 405) response = transport_->send({"GET", uri, ""});
  if (response.status < 200 || response.status > 299) {
    throw Error(ErrorCode::kResolutionIo, uri + " returned " + std::to_string(response.status));
  }
  return response.content_type;
}

}  // namespace psi
