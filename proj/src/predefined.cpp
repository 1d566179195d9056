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

#include "psi/predefined.hpp"

#include "psi/error.hpp"

namespace psi {
namespace {

struct RawTemplate {
  const char* name;
  const char* body;
};

// Template bodies as published. "allof" is kept in its published spelling;
// the compiler reads it as allOf.
constexpr RawTemplate kTemplates[] = {
    {"integer", R"json({
      "type": "integer",
      "minimum": "%min",
      "maximum": "%max",
      "default": "%default"
    })json"},
    {"number", R"json({
      "type": "number",
      "minimum": "%min",
      "maximum": "%max",
      "default": "%default"
    })json"},
    {"boolean", R"json({
      "type": "boolean",
      "default": "%default"
    })json"},
    {"string", R"json({
      "type": "string",
      "default": "%default"
    })json"},
    {"object", R"json({
      "type": "object",
      "default": "%default"
    })json"},
    {"array", R"json({
      "type": "array",
      "items": "%items",
      "minItems": "%size",
      "maxItems": "%size"
    })json"},
    {"atomicValue", R"json({
      "type": [ "integer", "number", "boolean", "string" ]
    })json"},
    {"atomicValueSchema", R"json({
      "/type": { "enum" : [ "integer", "number", "boolean", "string" ] }
    })json"},
    {"numberSchema", R"json({
      "/type": { "enum" : [ "integer", "number" ] }
    })json"},
    {"nominalValueSchema", R"json({
      "/enum": { "$array": { "allItems": "$string" } }
    })json"},
    {"uri", R"json({
      "type": "string",
      "format": "uri"
    })json"},
    {"richValueSchema", R"json({
      "/type=":      "string",
      "/format=":    "uri",
      "/mediaType=": "%mediaType"
    })json"},
    {"relation", R"json({
      "/psiType=":      "relation",
      "/uri=":          "$uri",
      "?description=":  "$string",
      "/size=":         "$integer",
      "/defaultAttribute=": "$uri",
      "/attributes=":   { "$array" : { "items" : "$uri" } },
      "?querySchema=": "$object"
    })json"},
    {"attribute", R"json({
      "/psiType=":      "attribute",
      "/uri=":          "$uri",
      "?description=":  "$string",
      "/emits=":        "$object",
      "?relation=":     "$uri",
      "?subattributes=": {
        "oneOf" : [
          { "$array": { "allItems": "$uri" } },
          { "/*" : "$uri" }
        ]
      },
      "?querySchema=": "$object"
    })json"},
    {"arrayAttribute", R"json({
      "allof": [ "$attribute" ],
      "/emits": {
        "/type": "array",
        "/items": { "$array": { "allItems": "%allItems" } }
      }
    })json"},
    {"numberAttribute", R"json({
      "allof" : [ "$attribute" ],
      "/emits": {
        "/type": { "enum": [ "integer", "number" ] }
      }
    })json"},
    {"fixedAttribute", R"json({
      "allof": [ "$attribute" ],
      "/emits": {
        "/enum": "%values"
      }
    })json"},
    {"nominalAttribute", R"json({
      "allof": [ "$attribute" ],
      "/emits": {
        "/enum": { "$array": { "allItems": "%allItems" } }
      }
    })json"},
    {"atomicAttribute", R"json({
      "allof": [ "$attribute" ],
      "/emits": {
        "/type": { "enum": [ "integer", "number", "boolean", "string" ] }
      }
    })json"},
    {"richValueAttribute", R"json({
      "allof": [ "$attribute" ],
      "/emits": { "$richValueSchema" : { "mediaType": "%mediaType" } }
    })json"},
};

void collect_arguments(const Value& v, std::set<std::string>& out) {
  if (auto name = placeholder_name(v)) {
    out.insert(*name);
  } else if (v.is_object()) {
    for (const auto& [key, child] : v.items()) collect_arguments(child, out);
  } else if (v.is_array()) {
    for (const auto& child : v) collect_arguments(child, out);
  }
}

// Returns nullopt when `v` is an unfilled placeholder and should be removed.
std::optional<Value> substitute(const Value& v, const Value& args) {
  if (auto name = placeholder_name(v)) {
    auto it = args.find(*name);
    if (it == args.end()) return std::nullopt;
    return *it;
  }
  if (v.is_object()) {
    Value out = Value::object();
    for (const auto& [key, child] : v.items()) {
      if (!key.empty() && key.front() == '%') {
        throw Error(ErrorCode::kMalformedSchema,
                    "template placeholder \"" + key + "\" used as a property key");
      }
      if (auto filled = substitute(child, args)) out[key] = std::move(*filled);
    }
    return out;
  }
  if (v.is_array()) {
    Value out = Value::array();
    for (const auto& child : v) {
      if (auto filled = substitute(child, args)) out.push_back(std::move(*filled));
    }
    return out;
  }
  return v;
}

}  // namespace

const std::vector<std::pair<std::string, Value>>& predefined_templates() {
  static const auto* templates = [] {
    auto* out = new std::vector<std::pair<std::string, Value>>();
    for (const auto& raw : kTemplates) out->emplace_back(raw.name, parse_json(raw.body));
    return out;
  }();
  return *templates;
}

const Value* find_predefined(std::string_view name) {
  for (const auto& [key, tmpl] : predefined_templates()) {
    if (key == name) return &tmpl;
  }
  return nullptr;
}

std::optional<std::string> placeholder_name(const Value& v) {
  if (!v.is_string()) return std::nullopt;
  const auto& s = v.get_ref<const std::string&>();
  if (s.size() < 2 || s.front() != '%') return std::nullopt;
  return s.substr(1);
}

std::set<std::string> template_arguments(const Value& tmpl) {
  std::set<std::string> out;
  collect_arguments(tmpl, out);
  return out;
}

Value instantiate_template(const Value& tmpl, const Value& args) {
  Value out = substitute(tmpl, args).value_or(Value::object());
  if (!args.is_object() || !out.is_object()) return out;
  std::set<std::string> known = template_arguments(tmpl);
  for (const auto& [key, value] : args.items()) {
    if (known.count(key)) continue;
    out[key] = value;
  }
  return out;
}

Value coerce_argument(std::string_view text) {
  try {
    Value v = parse_json(text);
    if (!v.is_string()) return v;
  } catch (const Error&) {
  }
  return Value(std::string(text));
}

Value arguments_from_query(const QueryPairs& pairs, const std::set<std::string>& skip) {
  Value args = Value::object();
  for (const auto& [key, value] : pairs) {
    if (skip.count(key)) continue;
    args[key] = coerce_argument(value);
  }
  return args;
}

}  // namespace psi
