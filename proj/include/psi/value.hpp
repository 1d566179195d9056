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

#ifndef PSI_VALUE_HPP
#define PSI_VALUE_HPP

#include <string>
#include <string_view>

#include "json.hpp"

namespace psi {

/// The JSON value universe exchanged by every PSI resource. Object keys keep
/// insertion order so serialization is deterministic.
///
/// Integer (number_integer) and Number (number_float) are distinct variants
/// even when numerically equal. Values built by parse_json() never contain
/// null, unsigned integers, or duplicate keys.
using Value = nlohmann::ordered_json;

enum class ValueKind { kInteger, kNumber, kText, kFlag, kSequence, kMapping, kNull };

ValueKind kind_of(const Value& v) noexcept;

/// True for Integer and Number.
inline bool is_numeric(const Value& v) noexcept { return v.is_number(); }

/// True for integers and for Numbers with zero fractional part; this is the
/// "integer" type test used during validation.
bool is_integral(const Value& v) noexcept;

/// Atomic values are integers, numbers, strings and booleans.
inline bool is_atomic(const Value& v) noexcept {
  return v.is_number() || v.is_string() || v.is_boolean();
}

/// Strict RFC 4627 parse. Throws Error(kSyntax) with the byte offset on
/// malformed text, on `null`, and on duplicate object keys. Integers without
/// fraction or exponent parse as Integer.
Value parse_json(std::string_view text);

/// Compact, deterministic text: keys in insertion order, doubles in the
/// shortest form that round-trips (integral doubles keep a ".0").
std::string serialize_json(const Value& v);

/// Indented variant for human consumption (CLI output).
std::string serialize_json_pretty(const Value& v);

/// Structural identity: same variants, same order-insensitive object content.
/// Integer 2 and Number 2.0 are *not* identical.
bool identical(const Value& a, const Value& b);

/// JSON-Schema equality used by `enum` and value-form constraints: objects
/// compare order-insensitively and Integer 2 equals Number 2.0.
bool json_equal(const Value& a, const Value& b);

/// Numeric view of Integer or Number.
double as_double(const Value& v);

}  // namespace psi

#endif  // PSI_VALUE_HPP
