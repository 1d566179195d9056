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

#include "psi/schema_lang.hpp"

#include <set>

#include "psi/error.hpp"
#include "psi/uri.hpp"

namespace psi {
namespace {

bool legal_property_name(std::string_view name) {
  if (name.empty()) return false;
  if (name.front() == '/' || name.front() == '?') return false;
  if (name.back() == '=' || name.back() == '*') return false;
  return true;
}

[[noreturn]] void bad_key(std::string_view key) {
  throw Error(ErrorCode::kMalformedSchema, "illegal constraint key \"" + std::string(key) + "\"");
}

}  // namespace

ConstraintKey classify_key(std::string_view key) {
  if (key.empty()) return {KeyKind::kKeyword, std::string()};
  switch (key.front()) {
    case '/':
    case '?': {
      bool mandatory = key.front() == '/';
      if (mandatory && key == "/*") return {KeyKind::kAdditionalProperties, "*"};
      std::string_view name = key.substr(1);
      bool value_form = !name.empty() && name.back() == '=';
      if (value_form) name.remove_suffix(1);
      if (!legal_property_name(name)) bad_key(key);
      KeyKind kind = mandatory ? (value_form ? KeyKind::kMandatoryValue : KeyKind::kMandatory)
                               : (value_form ? KeyKind::kOptionalValue : KeyKind::kOptional);
      return {kind, std::string(name)};
    }
    case '#':
      if (key.size() == 1) bad_key(key);
      return {KeyKind::kLocalDefinition, std::string(key.substr(1))};
    case '$':
      if (key == "$ref" || key == "$schema") return {KeyKind::kKeyword, std::string(key)};
      if (key.size() == 1) bad_key(key);
      return {KeyKind::kReference, std::string(key.substr(1))};
    default:
      return {KeyKind::kKeyword, std::string(key)};
  }
}

bool is_reference_string(std::string_view s) {
  return !s.empty() && s.front() == '$' && s != "$ref" && s != "$schema";
}

Reference parse_reference(std::string_view s, std::optional<Value> params) {
  if (s.size() < 2 || s.front() != '$') {
    throw Error(ErrorCode::kMalformedSchema, "empty schema reference");
  }
  Reference ref;
  ref.address = s.substr(1);
  ref.scope = has_uri_scheme(ref.address) ? ReferenceScope::kGlobal : ReferenceScope::kLocal;
  ref.params = std::move(params);
  return ref;
}

std::string parse_rich_type(std::string_view s) {
  if (s.size() < 2 || s.front() != '@') {
    throw Error(ErrorCode::kMalformedSchema, "rich type without a media type");
  }
  return std::string(s.substr(1));
}

Value compose_array(const std::vector<Value>& schemas) {
  Value items = Value::array();
  for (const auto& s : schemas) items.push_back(s);
  return Value{{"type", "array"}, {"items", std::move(items)}};
}

Value compose_object(const std::vector<std::string>& keys, const std::vector<Value>& schemas) {
  if (keys.size() != schemas.size()) {
    throw Error(ErrorCode::kMalformedSchema, "object composition needs one key per schema");
  }
  Value out = Value::object();
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!legal_property_name(keys[i])) bad_key(keys[i]);
    if (!seen.insert(keys[i]).second) {
      throw Error(ErrorCode::kMalformedSchema, "duplicate composition key \"" + keys[i] + "\"");
    }
    out["/" + keys[i]] = schemas[i];
  }
  return out;
}

}  // namespace psi
