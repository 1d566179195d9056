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

#ifndef PSI_SCHEMA_LANG_HPP
#define PSI_SCHEMA_LANG_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psi/value.hpp"

namespace psi {

enum class KeyKind {
  kMandatory,             // "/K"
  kOptional,              // "?K"
  kMandatoryValue,        // "/K="
  kOptionalValue,         // "?K="
  kAdditionalProperties,  // "/*"
  kLocalDefinition,       // "#K"
  kReference,             // "$R" (except $ref and $schema)
  kKeyword,               // anything else
};

struct ConstraintKey {
  KeyKind kind = KeyKind::kKeyword;
  std::string name;  // K, F or R; the whole key for keywords

  bool is_property() const {
    return kind == KeyKind::kMandatory || kind == KeyKind::kOptional ||
           kind == KeyKind::kMandatoryValue || kind == KeyKind::kOptionalValue;
  }
  bool is_required() const {
    return kind == KeyKind::kMandatory || kind == KeyKind::kMandatoryValue;
  }
  bool is_value_form() const {
    return kind == KeyKind::kMandatoryValue || kind == KeyKind::kOptionalValue;
  }
};

/// Classifies an object key in schema position. Throws
/// Error(kMalformedSchema) when the key has one of the property/definition/
/// reference shapes but an empty or illegal name ("/", "?=", "#", "$", ...).
ConstraintKey classify_key(std::string_view key);

enum class ReferenceScope { kLocal, kGlobal };

struct Reference {
  std::string address;
  ReferenceScope scope = ReferenceScope::kLocal;
  std::optional<Value> params;  // set for parameterised references
};

/// True for "$R" strings other than "$ref" / "$schema".
bool is_reference_string(std::string_view s);

/// Parses "$R". Throws Error(kMalformedSchema) on an empty address.
Reference parse_reference(std::string_view s, std::optional<Value> params = std::nullopt);

/// "@image/jpeg" -> "image/jpeg". Throws Error(kMalformedSchema) when the
/// media type is empty.
std::string parse_rich_type(std::string_view s);

inline bool is_rich_type_string(std::string_view s) { return !s.empty() && s.front() == '@'; }

/// {"type":"array","items":[S1,...,Sn]}
Value compose_array(const std::vector<Value>& schemas);

/// {"/K1":S1,...,"/Kn":Sn}. Throws Error(kMalformedSchema) on duplicate or
/// illegal keys, or when the lists differ in length.
Value compose_object(const std::vector<std::string>& keys, const std::vector<Value>& schemas);

}  // namespace psi

#endif  // PSI_SCHEMA_LANG_HPP
