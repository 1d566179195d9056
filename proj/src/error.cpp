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

#include "psi/error.hpp"

namespace psi {

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kSyntax:
    case ErrorCode::kMalformedUri:
    case ErrorCode::kMalformedSchema:
    case ErrorCode::kUnresolvedReference:
    case ErrorCode::kResolutionIo:
    case ErrorCode::kResolutionCycle:
    case ErrorCode::kBadRequest:
      return 400;
    case ErrorCode::kForbidden:
      return 403;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kMethodNotAllowed:
      return 405;
    case ErrorCode::kNotImplemented:
      return 501;
    case ErrorCode::kInternal:
      return 500;
  }
  return 500;
}

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kSyntax: return "syntax";
    case ErrorCode::kMalformedUri: return "malformed-uri";
    case ErrorCode::kMalformedSchema: return "malformed-schema";
    case ErrorCode::kUnresolvedReference: return "unresolved-reference";
    case ErrorCode::kResolutionIo: return "resolution-io";
    case ErrorCode::kResolutionCycle: return "resolution-cycle";
    case ErrorCode::kBadRequest: return "bad-request";
    case ErrorCode::kForbidden: return "forbidden";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kMethodNotAllowed: return "method-not-allowed";
    case ErrorCode::kNotImplemented: return "not-implemented";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

}  // namespace psi
