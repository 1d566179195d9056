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

#include "psi/compatibility.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "psi/uri.hpp"
#include "psi/validator.hpp"

namespace psi {
namespace {

const std::set<std::string> kAllTypes = {"integer", "number", "string", "boolean", "array", "object"};
const std::set<std::string> kAnnotations = {"$schema", "title", "description", "default", "format"};

Compatibility yes() { return {true, {}}; }
Compatibility no(std::string reason) { return {false, std::move(reason)}; }

Value strip(const Value& s) {
  if (s.is_boolean() && s.get<bool>()) return Value::object();
  if (!s.is_object()) return s;
  Value out = Value::object();
  for (const auto& [key, v] : s.items()) {
    if (!kAnnotations.count(key)) out[key] = v;
  }
  return out;
}

std::set<std::string> types_of(const Value& s) {
  if (!s.contains("type")) return kAllTypes;
  const Value& t = s["type"];
  std::set<std::string> out;
  if (t.is_string()) out.insert(t.get<std::string>());
  if (t.is_array()) {
    for (const auto& x : t) {
      if (x.is_string()) out.insert(x.get<std::string>());
    }
  }
  return out;
}

bool admits(const std::set<std::string>& types, std::initializer_list<const char*> any_of) {
  return std::any_of(any_of.begin(), any_of.end(), [&](const char* t) { return types.count(t) > 0; });
}

Value without(const Value& s, const char* key) {
  Value out = s;
  out.erase(key);
  return out;
}

double number_or(const Value& s, const char* key, double fallback) {
  return s.contains(key) && s[key].is_number() ? s[key].get<double>() : fallback;
}

Compatibility contains(const Value& emits_in, const Value& accepts_in);

Compatibility check_arrays(const Value& e, const Value& a) {
  const Value* ei = e.contains("items") ? &e["items"] : nullptr;
  double e_min = number_or(e, "minItems", 0);
  double e_max = number_or(e, "maxItems", std::numeric_limits<double>::infinity());
  if (ei != nullptr && ei->is_array()) {
    e_min = std::max(e_min, static_cast<double>(ei->size()));
    e_max = std::min(e_max, static_cast<double>(ei->size()));
  }
  if (a.contains("minItems") && e_min < number_or(a, "minItems", 0)) {
    return no("emitted arrays may have fewer items than accepted");
  }
  if (a.contains("maxItems") && e_max > number_or(a, "maxItems", 0)) {
    return no("emitted arrays may have more items than accepted");
  }
  if (!a.contains("items")) return yes();
  const Value& ai = a["items"];
  if (ai.is_array()) {
    if (ei == nullptr || !ei->is_array() || ei->size() != ai.size()) {
      return no("accepted arrays need exactly " + std::to_string(ai.size()) + " positional items");
    }
    for (std::size_t i = 0; i < ai.size(); ++i) {
      if (auto c = contains((*ei)[i], ai[i]); !c) return no("item " + std::to_string(i) + ": " + c.reason);
    }
    return yes();
  }
  if (ei == nullptr) return contains(Value::object(), ai);
  if (ei->is_array()) {
    for (std::size_t i = 0; i < ei->size(); ++i) {
      if (auto c = contains((*ei)[i], ai); !c) return no("item " + std::to_string(i) + ": " + c.reason);
    }
    return yes();
  }
  return contains(*ei, ai);
}

Compatibility check_objects(const Value& e, const Value& a) {
  const Value empty = Value::object();
  const Value& ep = e.contains("properties") && e["properties"].is_object() ? e["properties"] : empty;
  const Value& ap = a.contains("properties") && a["properties"].is_object() ? a["properties"] : empty;
  const Value* e_extra = e.contains("additionalProperties") ? &e["additionalProperties"] : nullptr;

  if (a.contains("required") && a["required"].is_array()) {
    for (const auto& name : a["required"]) {
      bool found = false;
      if (e.contains("required") && e["required"].is_array()) {
        for (const auto& r : e["required"]) found = found || r == name;
      }
      if (!found) return no("property " + serialize_json(name) + " is required but may be missing");
    }
  }
  for (const auto& [name, sa] : ap.items()) {
    const Value& source = ep.contains(name) ? ep[name] : (e_extra != nullptr ? *e_extra : empty);
    if (auto c = contains(source, sa); !c) return no("property \"" + name + "\": " + c.reason);
  }
  if (a.contains("additionalProperties")) {
    const Value& extra = a["additionalProperties"];
    for (const auto& [name, se] : ep.items()) {
      if (ap.contains(name)) continue;
      if (auto c = contains(se, extra); !c) return no("property \"" + name + "\": " + c.reason);
    }
    if (auto c = contains(e_extra != nullptr ? *e_extra : empty, extra); !c) {
      return no("additional properties: " + c.reason);
    }
  }
  return yes();
}

Compatibility contains(const Value& emits_in, const Value& accepts_in) {
  Value e = strip(emits_in);
  Value a = strip(accepts_in);

  if (a.is_object() && a.empty()) return yes();
  if (e.is_boolean()) return yes();  // only `false` survives strip(): the empty set
  if (a.is_boolean()) return no("nothing is accepted");
  if (json_equal(e, a)) return yes();

  ValidationOptions rich;
  rich.check_rich = true;
  if (!e.is_object()) {
    auto outcome = validate(e, a, rich);
    return outcome.valid() ? yes() : no(outcome.describe());
  }
  if (e.contains("enum") && e["enum"].is_array()) {
    for (const auto& member : e["enum"]) {
      if (auto outcome = validate(member, a, rich); !outcome.valid()) {
        return no("emitted value " + serialize_json(member) + " is not accepted");
      }
    }
    return yes();
  }
  if (!a.is_object()) return no("accepts only the literal " + serialize_json(a));

  if (a.contains("allOf")) {
    if (!a["allOf"].is_array()) return no("malformed allOf");
    for (const auto& branch : a["allOf"]) {
      if (auto c = contains(e, branch); !c) return c;
    }
    return contains(e, without(a, "allOf"));
  }
  if (e.contains("oneOf") && e["oneOf"].is_array()) {
    for (const auto& branch : e["oneOf"]) {
      if (auto c = contains(branch, a); !c) return no("an emitted alternative is not accepted: " + c.reason);
    }
    return yes();
  }
  if (e.contains("allOf") && e["allOf"].is_array()) {
    Compatibility rest = contains(without(e, "allOf"), a);
    if (rest) return rest;
    for (const auto& branch : e["allOf"]) {
      if (contains(branch, a)) return yes();
    }
    return rest;
  }
  if (a.contains("oneOf")) return no("cannot prove exclusivity of accepted alternatives");
  if (a.contains("enum")) return no("accepts a fixed set of values but emits an open set");

  static const std::set<std::string> kUnderstood = {
      "type",  "minimum",    "maximum",  "minItems", "maxItems",
      "items", "properties", "required", "additionalProperties", "mediaType"};
  for (const auto& [key, v] : a.items()) {
    if (!kUnderstood.count(key)) return no("cannot reason about accepted keyword \"" + key + "\"");
  }

  std::set<std::string> et = types_of(e);
  std::set<std::string> at = types_of(a);
  for (const auto& t : et) {
    bool covered = at.count(t) || (t == "integer" && at.count("number"));
    if (!covered) return no("emits " + t + " values that are not accepted");
  }

  if (admits(et, {"integer", "number"})) {
    if (a.contains("minimum") &&
        (!e.contains("minimum") || !e["minimum"].is_number() || e["minimum"].get<double>() < a["minimum"].get<double>())) {
      return no("emitted numbers may fall below the accepted minimum");
    }
    if (a.contains("maximum") &&
        (!e.contains("maximum") || !e["maximum"].is_number() || e["maximum"].get<double>() > a["maximum"].get<double>())) {
      return no("emitted numbers may exceed the accepted maximum");
    }
  }
  if (admits(et, {"string"}) && a.contains("mediaType")) {
    if (!e.contains("mediaType") || !e["mediaType"].is_string() ||
        normalize_media_type(e["mediaType"].get<std::string>()) !=
            normalize_media_type(a["mediaType"].get<std::string>())) {
      return no("emitted strings are not " + a["mediaType"].get<std::string>() + " values");
    }
  }
  if (admits(et, {"array"})) {
    if (auto c = check_arrays(e, a); !c) return c;
  }
  if (admits(et, {"object"})) {
    if (auto c = check_objects(e, a); !c) return c;
  }
  return yes();
}

}  // namespace

Compatibility check_compatibility(const Value& emits, const Value& accepts) {
  return contains(emits, accepts);
}

}  // namespace psi
