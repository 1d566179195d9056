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

#ifndef PSI_VALIDATOR_HPP
#define PSI_VALIDATOR_HPP

#include <memory>
#include <string>
#include <vector>

#include "psi/compiler.hpp"
#include "psi/value.hpp"

namespace psi {

struct Violation {
  std::string path;     // JSON-pointer-like location in the value, "" for root
  std::string keyword;  // constraint that failed
  std::string message;
};

struct ValidationOutcome {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  /// One line per violation, for error details and CLI output.
  std::string describe() const;
};

/// Looks up the Content-Type served for an http(s) URI. Throws Error
/// (kResolutionIo) when the URI cannot be reached or no Content-Type is sent.
class MediaTypeResolver {
 public:
  virtual ~MediaTypeResolver() = default;
  virtual std::string content_type(const std::string& uri) const = 0;
};

struct ValidationOptions {
  /// When set, `mediaType` annotations are enforced through validate_rich().
  std::shared_ptr<const MediaTypeResolver> resolver;
  /// Enforce `mediaType` even without a resolver: data URIs are checked and
  /// http(s) URIs fail as unverifiable.
  bool check_rich = false;
  std::size_t max_depth = 64;
};

/// Validates `v` against compiled schema `s`.
ValidationOutcome validate(const Value& v, const Value& s, const ValidationOptions& options = {});

/// Compiles `s` in `ctx`, then validates with rich-value checking enabled.
ValidationOutcome validate_psi(const Value& v, const Value& s, const ResolutionContext& ctx,
                               ValidationOptions options = {});

/// Rich-value check against media type `media_type`. `resolver` may be null,
/// in which case http(s) URIs are reported as unverifiable.
ValidationOutcome validate_rich(const Value& v, const std::string& media_type,
                                const MediaTypeResolver* resolver);

}  // namespace psi

#endif  // PSI_VALIDATOR_HPP
