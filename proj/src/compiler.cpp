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

#include "psi/compiler.hpp"

#include <algorithm>
#include <set>

#include "psi/error.hpp"
#include "psi/predefined.hpp"
#include "psi/uri.hpp"

namespace psi {
namespace {

constexpr std::size_t kMaxResolutionDepth = 64;

const std::set<std::string, std::less<>> kTypeNames = {"integer", "number", "string",
                                                        "boolean", "array",  "object"};

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kMalformedSchema,
              "invalid schema at " + (path.empty() ? std::string("root") : path) + ": " + what);
}

// Argument checks on compiled output. Only keyword positions are inspected;
// bare atoms and arrays in schema position are literal schemas.
void check_compiled(const Value& s, const std::string& path) {
  if (!s.is_object()) return;
  for (const auto& [key, v] : s.items()) {
    std::string here = path + "/" + key;
    if (key == "type") {
      auto ok = [](const Value& t) { return t.is_string() && kTypeNames.count(t.get_ref<const std::string&>()); };
      bool valid = ok(v) || (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), ok));
      if (!valid) malformed(here, "type must name a JSON type or list of types");
    } else if (key == "minimum" || key == "maximum") {
      if (!v.is_number()) malformed(here, key + " must be numeric");
    } else if (key == "minItems" || key == "maxItems") {
      if (!is_integral(v) || v.get<double>() < 0) malformed(here, key + " must be a non-negative integer");
    } else if (key == "enum") {
      if (!v.is_array()) malformed(here, "enum must be an array");
    } else if (key == "allOf" || key == "oneOf") {
      if (!v.is_array() || v.empty()) malformed(here, key + " must be a non-empty array of schema");
      for (std::size_t i = 0; i < v.size(); ++i) check_compiled(v[i], here + "/" + std::to_string(i));
    } else if (key == "items") {
      if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) check_compiled(v[i], here + "/" + std::to_string(i));
      } else if (v.is_object() || v.is_boolean()) {
        check_compiled(v, here);
      } else {
        malformed(here, "items must be a schema or an array of schema");
      }
    } else if (key == "properties") {
      if (!v.is_object()) malformed(here, "properties must be an object");
      for (const auto& [name, sub] : v.items()) check_compiled(sub, here + "/" + name);
    } else if (key == "required") {
      if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const Value& r) { return r.is_string(); })) {
        malformed(here, "required must be an array of strings");
      }
    } else if (key == "additionalProperties") {
      if (!v.is_object() && !v.is_boolean()) malformed(here, "additionalProperties must be a schema");
      check_compiled(v, here);
    }
  }
}

void move_to_front(Value& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key) || obj.begin().key() == key) return;
  Value out = Value::object();
  out[key] = obj[key];
  for (auto& [k, v] : obj.items()) {
    if (k != key) out[k] = std::move(v);
  }
  obj = std::move(out);
}

class Compiler {
 public:
  Compiler(const ResolutionContext& ctx, std::vector<std::string>* diagnostics)
      : ctx_(ctx), diagnostics_(diagnostics) {}

  Value run(const Value& s) {
    if (s.is_null()) throw Error(ErrorCode::kMalformedSchema, "null is not a schema");
    if (s.is_number() || s.is_boolean()) return s;
    if (s.is_string()) return compile_string(s.get_ref<const std::string&>());
    if (s.is_array()) {
      Value out = Value::array();
      for (const auto& item : s) out.push_back(run(item));
      return out;
    }
    return compile_object(s);
  }

  Value resolve(const Reference& ref) {
    if (ref.scope == ReferenceScope::kGlobal) return fetch(ref.address, ref.params);
    for (auto scope = scopes_.rbegin(); scope != scopes_.rend(); ++scope) {
      auto it = scope->find(ref.address);
      if (it != scope->end()) return with_params(it->second, ref.params);
    }
    const auto* binding = ctx_.lookup(ref.address);
    if (binding == nullptr) {
      throw Error(ErrorCode::kUnresolvedReference, "unresolved schema reference $" + ref.address);
    }
    if (binding->is_global) return fetch(binding->address, ref.params);
    return with_params(binding->schema, ref.params);
  }

 private:
  static Value with_params(const Value& schema, const std::optional<Value>& params) {
    if (!params || params->empty()) return schema;
    return instantiate_template(schema, *params);
  }

  Value fetch(const std::string& address, const std::optional<Value>& params) const {
    return ctx_.fetcher().fetch(address, params ? *params : Value());
  }

  Value compile_string(const std::string& s) {
    if (is_reference_string(s)) return compile_reference(parse_reference(s));
    if (is_rich_type_string(s)) {
      return Value{{"type", "string"}, {"format", "uri"}, {"mediaType", parse_rich_type(s)}};
    }
    return s;
  }

  Value compile_reference(const Reference& ref) {
    std::string key = (ref.scope == ReferenceScope::kGlobal ? "global " : "local ") + ref.address;
    if (ref.params) key += " " + serialize_json(*ref.params);
    if (std::find(active_.begin(), active_.end(), key) != active_.end()) {
      throw Error(ErrorCode::kResolutionCycle, "schema reference cycle through $" + ref.address);
    }
    if (active_.size() >= kMaxResolutionDepth) {
      throw Error(ErrorCode::kResolutionCycle, "schema references nest too deeply at $" + ref.address);
    }
    Value target = resolve(ref);
    active_.push_back(key);
    Value out = run(target);
    active_.pop_back();
    return out;
  }

  Value compile_object(const Value& s) {
    std::map<std::string, Value> defs;
    const Value* param_ref_value = nullptr;
    std::string param_ref_key;
    for (const auto& [key, v] : s.items()) {
      ConstraintKey ck = classify_key(key);
      if (ck.kind == KeyKind::kLocalDefinition) {
        defs[ck.name] = v;
      } else if (ck.kind == KeyKind::kReference) {
        if (!v.is_object()) {
          throw Error(ErrorCode::kMalformedSchema,
                      "parameterised reference \"" + key + "\" needs an object of parameters");
        }
        if (param_ref_value == nullptr) {
          param_ref_value = &v;
          param_ref_key = key;
        } else {
          note("second parameterised reference \"" + key + "\" ignored");
        }
      }
    }

    scopes_.push_back(std::move(defs));
    Value out;
    if (param_ref_value != nullptr) {
      for (const auto& [key, v] : s.items()) {
        ConstraintKey ck = classify_key(key);
        if (ck.kind != KeyKind::kLocalDefinition && key != param_ref_key) {
          note("property \"" + key + "\" discarded next to parameterised reference \"" +
               param_ref_key + "\"");
        }
      }
      out = compile_reference(parse_reference(param_ref_key, *param_ref_value));
    } else {
      out = translate(s);
    }
    scopes_.pop_back();
    return out;
  }

  Value translate(const Value& s) {
    Value out = Value::object();
    auto require = [&](const std::string& name) {
      Value& req = out["required"];
      if (!req.is_array()) req = Value::array();
      for (const auto& r : req) {
        if (r == name) return;
      }
      req.push_back(name);
    };
    for (const auto& [key, v] : s.items()) {
      ConstraintKey ck = classify_key(key);
      switch (ck.kind) {
        case KeyKind::kLocalDefinition:
          break;
        case KeyKind::kAdditionalProperties:
          out["additionalProperties"] = run(v);
          out["type"] = "object";
          break;
        case KeyKind::kMandatory:
        case KeyKind::kOptional:
        case KeyKind::kMandatoryValue:
        case KeyKind::kOptionalValue: {
          Value& props = out["properties"];
          if (!props.is_object()) props = Value::object();
          if (ck.is_value_form() && !contains_schema_syntax(v)) {
            props[ck.name] = Value{{"enum", Value::array({v})}};
          } else {
            props[ck.name] = run(v);
          }
          if (ck.is_required()) require(ck.name);
          out["type"] = "object";
          break;
        }
        case KeyKind::kReference:
          break;  // handled by compile_object
        case KeyKind::kKeyword: {
          if (key == "allItems") {
            out["items"] = run(v);
          } else if (key == "allof" || key == "allOf") {
            out["allOf"] = run(v);
          } else if (key == "properties" && v.is_object()) {
            Value& props = out["properties"];
            if (!props.is_object()) props = Value::object();
            for (const auto& [name, sub] : v.items()) props[name] = run(sub);
          } else if (key == "required" && v.is_array()) {
            for (const auto& r : v) {
              if (r.is_string()) {
                require(r.get<std::string>());
              } else {
                out["required"].push_back(r);
              }
            }
          } else if (key == "type" && out.contains("type")) {
            if (v != "object") note("explicit type ignored; object constraints force type object");
          } else {
            out[key] = run(v);
          }
          break;
        }
      }
    }
    move_to_front(out, "type");
    return out;
  }

  void note(std::string message) {
    if (diagnostics_ != nullptr) diagnostics_->push_back(std::move(message));
  }

  const ResolutionContext& ctx_;
  std::vector<std::string>* diagnostics_;
  std::vector<std::map<std::string, Value>> scopes_;
  std::vector<std::string> active_;
};

}  // namespace

PredefinedFetcher::PredefinedFetcher(std::string schema_root,
                                     std::shared_ptr<const SchemaFetcher> fallback)
    : root_(std::move(schema_root)), fallback_(std::move(fallback)) {
  while (!root_.empty() && root_.back() == '/') root_.pop_back();
}

Value PredefinedFetcher::fetch(const std::string& address, const Value& params) const {
  auto [path, query] = split_target(address);
  if (path.size() > root_.size() + 1 && path.compare(0, root_.size(), root_) == 0 &&
      path[root_.size()] == '/') {
    if (const Value* tmpl = find_predefined(std::string_view(path).substr(root_.size() + 1))) {
      Value args = arguments_from_query(decode_query(query));
      if (params.is_object()) {
        for (const auto& [key, value] : params.items()) args[key] = value;
      }
      return instantiate_template(*tmpl, args);
    }
  }
  if (fallback_) return fallback_->fetch(address, params);
  throw Error(ErrorCode::kResolutionIo, "cannot fetch schema " + address);
}

ResolutionContext::ResolutionContext()
    : ResolutionContext(std::make_shared<PredefinedFetcher>(), std::string(kDefaultSchemaRoot)) {}

ResolutionContext::ResolutionContext(std::shared_ptr<const SchemaFetcher> fetcher,
                                     std::string schema_root)
    : fetcher_(std::move(fetcher)), root_(std::move(schema_root)) {
  while (!root_.empty() && root_.back() == '/') root_.pop_back();
  for (const auto& [name, tmpl] : predefined_templates()) bind_global(name, root_ + "/" + name);
}

void ResolutionContext::bind_global(const std::string& name, std::string address) {
  bindings_[name] = Binding{true, std::move(address), Value()};
}

void ResolutionContext::bind_schema(const std::string& name, Value schema) {
  bindings_[name] = Binding{false, std::string(), std::move(schema)};
}

const ResolutionContext::Binding* ResolutionContext::lookup(const std::string& name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

Value resolve_reference(const Reference& ref, const ResolutionContext& ctx) {
  return Compiler(ctx, nullptr).resolve(ref);
}

Value compile(const Value& schema, const ResolutionContext& ctx, const CompileOptions& options) {
  Value out = Compiler(ctx, options.diagnostics).run(schema);
  check_compiled(out, "");
  if (options.add_schema_uri && out.is_object() && !out.contains("$schema")) {
    out["$schema"] = std::string(kHyperSchemaUri);
    move_to_front(out, "$schema");
  }
  return out;
}

bool contains_schema_syntax(const Value& v) {
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    return is_reference_string(s) || is_rich_type_string(s);
  }
  if (v.is_array()) return std::any_of(v.begin(), v.end(), contains_schema_syntax);
  if (v.is_object()) {
    for (const auto& [key, child] : v.items()) {
      if (is_reference_string(key) || contains_schema_syntax(child)) return true;
    }
  }
  return false;
}

}  // namespace psi
