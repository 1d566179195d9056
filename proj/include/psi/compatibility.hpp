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

#ifndef PSI_COMPATIBILITY_HPP
#define PSI_COMPATIBILITY_HPP

#include <string>

#include "psi/value.hpp"

namespace psi {

struct Compatibility {
  bool ok = false;
  std::string reason;  // why compatibility could not be shown

  explicit operator bool() const { return ok; }
};

/// Conservative containment test on compiled schemas: returns ok only when
/// every value valid for `emits` is provably valid for `accepts`. Anything
/// it cannot prove is reported as incompatible.
Compatibility check_compatibility(const Value& emits, const Value& accepts);

}  // namespace psi

#endif  // PSI_COMPATIBILITY_HPP
