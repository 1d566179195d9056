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

#ifndef PSI_ERROR_HPP
#define PSI_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace psi {

/// Failure categories shared by every layer. Each maps onto exactly one
/// HTTP status (see http_status()).
enum class ErrorCode {
  kSyntax,               // malformed JSON text
  kMalformedUri,         // URI or percent-encoding that does not parse
  kMalformedSchema,      // PSI schema that cannot be compiled
  kUnresolvedReference,  // local address with no binding
  kResolutionIo,         // global schema or resource fetch failed
  kResolutionCycle,      // reference chain revisits an address
  kBadRequest,
  kForbidden,
  kNotFound,
  kMethodNotAllowed,
  kNotImplemented,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, const std::string& message, std::string detail)
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }

  /// Optional longer explanation (violation listing, upstream body, ...).
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Status code used on the wire. Validation and resolution problems are
/// always client errors; only kInternal yields 500.
int http_status(ErrorCode code) noexcept;

std::string_view error_code_name(ErrorCode code) noexcept;

}  // namespace psi

#endif  // PSI_ERROR_HPP
