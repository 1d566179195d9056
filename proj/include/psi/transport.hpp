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


#ifndef PSI_TRANSPORT_HPP
#define PSI_TRANSPORT_HPP

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

#include "psi/compiler.hpp"
#include "psi/validator.hpp"
#include "psi/value.hpp"

namespace psi {

struct HttpRequest {
  std::string method = "GET";
  std::string uri;  // absolute
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string location;
  std::string content_type = "application/json";
};

class Transport {
 public:
  virtual ~Transport() = default;
  /// Network failures throw Error(kResolutionIo).
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// Real HTTP(S) over cpp-httplib.
class HttpClientTransport : public Transport {
 public:
  explicit HttpClientTransport(std::chrono::milliseconds timeout = std::chrono::seconds(10));
  HttpResponse send(const HttpRequest& request) override;

 private:
  std::chrono::milliseconds timeout_;
};

/// Routes requests for mounted origins to in-process handlers and
/// everything else to a fallback transport.
class LocalTransport : public Transport {
 public:
  using Handler = std::function<HttpResponse(const HttpRequest&)>;

  explicit LocalTransport(std::shared_ptr<Transport> fallback = nullptr);

  void mount(const std::string& origin, Handler handler);
  void unmount(const std::string& origin);
  HttpResponse send(const HttpRequest& request) override;

 private:
  std::shared_ptr<Transport> fallback_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Handler> handlers_;
};

/// GETs `uri` and parses the JSON body. Non-2xx statuses throw
/// Error(kResolutionIo) carrying the status and any error message.
Value get_json(Transport& transport, const std::string& uri);

/// Schema fetcher that GETs schema resources; params become query arguments.
class TransportSchemaFetcher : public SchemaFetcher {
 public:
  explicit TransportSchemaFetcher(std::shared_ptr<Transport> transport);
  Value fetch(const std::string& address, const Value& params) const override;

 private:
  std::shared_ptr<Transport> transport_;
};

/// Reports the Content-Type an HTTP(S) URI serves (HEAD, then GET on 405).
class TransportMediaTypeResolver : public MediaTypeResolver {
 public:
  explicit TransportMediaTypeResolver(std::shared_ptr<Transport> transport);
  std::string content_type(const std::string& uri) const override;

 private:
  std::shared_ptr<Transport> transport_;
};

}  // namespace psi

#endif  // PSI_TRANSPORT_HPP
