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

#ifndef PSI_COMPILER_HPP
#define PSI_COMPILER_HPP

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "psi/schema_lang.hpp"
#include "psi/value.hpp"

namespace psi {

inline constexpr std::string_view kDefaultSchemaRoot = "http://localhost/schema";
inline constexpr std::string_view kHyperSchemaUri = "http://json-schema.org/draft-04/hyper-schema#";

/// Resolves global addresses. `params` is an object, or null when the
/// reference carried none. Implementations must be safe for concurrent use.
class SchemaFetcher {
 public:
  virtual ~SchemaFetcher() = default;
  virtual Value fetch(const std::string& address, const Value& params) const = 0;
};

/// Serves `<schema_root>/<name>` for every predefined schema without any
/// I/O, instantiating templates with the reference parameters. Other
/// addresses go to `fallback`, or fail with kResolutionIo.
class PredefinedFetcher : public SchemaFetcher {
 public:
  explicit PredefinedFetcher(std::string schema_root = std::string(kDefaultSchemaRoot),
                             std::shared_ptr<const SchemaFetcher> fallback = nullptr);

  Value fetch(const std::string& address, const Value& params) const override;

  const std::string& schema_root() const { return root_; }

 private:
  std::string root_;
  std::shared_ptr<const SchemaFetcher> fallback_;
};

/// Local-address bindings plus the global fetcher. Every predefined name is
/// bound to `<schema_root>/<name>` at construction.
class ResolutionContext {
 public:
  struct Binding {
    bool is_global = true;
    std::string address;  // when is_global
    Value schema;         // otherwise
  };

  ResolutionContext();
  ResolutionContext(std::shared_ptr<const SchemaFetcher> fetcher, std::string schema_root);

  void bind_global(const std::string& name, std::string address);
  void bind_schema(const std::string& name, Value schema);
  const Binding* lookup(const std::string& name) const;

  const SchemaFetcher& fetcher() const { return *fetcher_; }
  const std::string& schema_root() const { return root_; }

 private:
  std::shared_ptr<const SchemaFetcher> fetcher_;
  std::string root_;
  std::map<std::string, Binding> bindings_;
};

struct CompileOptions {
  bool add_schema_uri = true;                 // "$schema" on an object root
  std::vector<std::string>* diagnostics = nullptr;
};

/// Resolves one reference to the PSI schema it denotes (not yet compiled).
Value resolve_reference(const Reference& ref, const ResolutionContext& ctx);

/// Translates a PSI schema into the JSON Schema subset understood by
/// validate(). Throws Error with kMalformedSchema, kUnresolvedReference,
/// kResolutionIo or kResolutionCycle.
Value compile(const Value& schema, const ResolutionContext& ctx, const CompileOptions& options = {});

/// True if `v` contains a "$R" reference or "@T" rich type anywhere, in a
/// string or as an object key.
bool contains_schema_syntax(const Value& v);

}  // namespace psi

#endif  // PSI_COMPILER_HPP
