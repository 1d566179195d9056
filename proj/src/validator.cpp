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

#include "psi/validator.hpp"

#include <cstdint>

#include "psi/error.hpp"
#include "psi/uri.hpp"

namespace psi {
namespace {

bool has_type(const Value& v, const std::string& type) {
  if (type == "integer") return is_integral(v);
  if (type == "number") return v.is_number();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "array") return v.is_array();
  if (type == "object") return v.is_object();
  return false;
}

// -1, 0, 1 like a three-way comparison; integers compare exactly.
int compare_numbers(const Value& a, const Value& b) {
  if (a.is_number_integer() && b.is_number_integer()) {
    auto x = a.get<std::int64_t>(), y = b.get<std::int64_t>();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  double x = a.get<double>(), y = b.get<double>();
  return x < y ? -1 : (x > y ? 1 : 0);
}

std::string short_text(const Value& v) {
  std::string text = serialize_json(v);
  if (text.size() > 60) text = text.substr(0, 57) + "...";
  return text;
}

class Checker {
 public:
  explicit Checker(const ValidationOptions& options) : options_(options) {}

  void check(const Value& v, const Value& s, const std::string& path, std::size_t depth,
             std::vector<Violation>& out) const {
    if (depth > options_.max_depth) {
      out.push_back({path, "depth", "value nests deeper than " + std::to_string(options_.max_depth)});
      return;
    }
    if (s.is_boolean()) {
      if (!s.get<bool>()) out.push_back({path, "false", "no value is valid here"});
      return;
    }
    if (!s.is_object()) {
      if (!json_equal(v, s)) {
        out.push_back({path, "const", "expected " + short_text(s) + ", got " + short_text(v)});
      }
      return;
    }

    for (const auto& [key, arg] : s.items()) {
      if (key == "type") {
        check_type(v, arg, path, out);
      } else if (key == "minimum") {
        if (v.is_number() && arg.is_number() && compare_numbers(v, arg) < 0) {
          out.push_back({path, key, short_text(v) + " is less than " + short_text(arg)});
        }
      } else if (key == "maximum") {
        if (v.is_number() && arg.is_number() && compare_numbers(v, arg) > 0) {
          out.push_back({path, key, short_text(v) + " is greater than " + short_text(arg)});
        }
      } else if (key == "enum") {
        check_enum(v, arg, path, out);
      } else if (key == "allOf") {
        if (!arg.is_array()) continue;
        for (const auto& branch : arg) check(v, branch, path, depth + 1, out);
      } else if (key == "oneOf") {
        check_one_of(v, arg, path, depth, out);
      } else if (key == "minItems") {
        if (v.is_array() && arg.is_number() && static_cast<double>(v.size()) < arg.get<double>()) {
          out.push_back({path, key, "array has " + std::to_string(v.size()) + " items, fewer than " +
                                        short_text(arg)});
        }
      } else if (key == "maxItems") {
        if (v.is_array() && arg.is_number() && static_cast<double>(v.size()) > arg.get<double>()) {
          out.push_back({path, key, "array has " + std::to_string(v.size()) + " items, more than " +
                                        short_text(arg)});
        }
      } else if (key == "items") {
        check_items(v, arg, path, depth, out);
      } else if (key == "required") {
        if (!v.is_object() || !arg.is_array()) continue;
        for (const auto& name : arg) {
          if (name.is_string() && !v.contains(name.get<std::string>())) {
            out.push_back({path, key, "missing property \"" + name.get<std::string>() + "\""});
          }
        }
      } else if (key == "properties") {
        if (!v.is_object() || !arg.is_object()) continue;
        for (const auto& [name, sub] : arg.items()) {
          auto it = v.find(name);
          if (it != v.end()) check(*it, sub, path + "/" + name, depth + 1, out);
        }
      } else if (key == "additionalProperties") {
        check_additional(v, s, arg, path, depth, out);
      } else if (key == "mediaType") {
        if ((options_.resolver || options_.check_rich) && v.is_string() && arg.is_string()) {
          for (auto& violation :
               validate_rich(v, arg.get<std::string>(), options_.resolver.get()).violations) {
            violation.path = path + violation.path;
            out.push_back(std::move(violation));
          }
        }
      }
      // format, default, title, description, $schema: annotations.
    }
  }

 private:
  void check_type(const Value& v, const Value& arg, const std::string& path,
                  std::vector<Violation>& out) const {
    bool ok = false;
    if (arg.is_string()) {
      ok = has_type(v, arg.get<std::string>());
    } else if (arg.is_array()) {
      for (const auto& t : arg) ok = ok || (t.is_string() && has_type(v, t.get<std::string>()));
    }
    if (!ok) out.push_back({path, "type", short_text(v) + " is not of type " + short_text(arg)});
  }

  void check_enum(const Value& v, const Value& arg, const std::string& path,
                  std::vector<Violation>& out) const {
    if (!arg.is_array()) return;
    for (const auto& candidate : arg) {
      if (json_equal(v, candidate)) return;
    }
    out.push_back({path, "enum", short_text(v) + " is not one of " + short_text(arg)});
  }

  void check_one_of(const Value& v, const Value& arg, const std::string& path, std::size_t depth,
                    std::vector<Violation>& out) const {
    if (!arg.is_array()) return;
    std::size_t matches = 0;
    for (const auto& branch : arg) {
      std::vector<Violation> scratch;
      check(v, branch, path, depth + 1, scratch);
      if (scratch.empty()) ++matches;
    }
    if (matches != 1) {
      out.push_back({path, "oneOf",
                     "value matches " + std::to_string(matches) + " alternatives, expected exactly one"});
    }
  }

  void check_items(const Value& v, const Value& arg, const std::string& path, std::size_t depth,
                   std::vector<Violation>& out) const {
    if (!v.is_array()) return;
    if (arg.is_array()) {
      if (v.size() != arg.size()) {
        out.push_back({path, "items", "array has " + std::to_string(v.size()) + " items, expected exactly " +
                                          std::to_string(arg.size())});
      }
      std::size_t n = std::min(v.size(), arg.size());
      for (std::size_t i = 0; i < n; ++i) check(v[i], arg[i], path + "/" + std::to_string(i), depth + 1, out);
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) check(v[i], arg, path + "/" + std::to_string(i), depth + 1, out);
  }

  void check_additional(const Value& v, const Value& s, const Value& arg, const std::string& path,
                        std::size_t depth, std::vector<Violation>& out) const {
    if (!v.is_object()) return;
    const Value* props = s.contains("properties") ? &s["properties"] : nullptr;
    for (const auto& [name, sub] : v.items()) {
      if (props != nullptr && props->is_object() && props->contains(name)) continue;
      if (arg.is_boolean()) {
        if (!arg.get<bool>()) out.push_back({path, "additionalProperties", "unexpected property \"" + name + "\""});
      } else {
        check(sub, arg, path + "/" + name, depth + 1, out);
      }
    }
  }

  const ValidationOptions& options_;
};

}  // namespace

std::string ValidationOutcome::describe() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "\n";
    out += (v.path.empty() ? std::string("/") : v.path) + ": " + v.keyword + ": " + v.message;
  }
  return out;
}

ValidationOutcome validate(const Value& v, const Value& s, const ValidationOptions& options) {
  ValidationOutcome outcome;
  Checker(options).check(v, s, "", 0, outcome.violations);
  return outcome;
}

ValidationOutcome validate_psi(const Value& v, const Value& s, const ResolutionContext& ctx,
                               ValidationOptions options) {
  options.check_rich = true;
  return validate(v, compile(s, ctx), options);
}

ValidationOutcome validate_rich(const Value& v, const std::string& media_type,
                                const MediaTypeResolver* resolver) {
  ValidationOutcome outcome;
  auto fail = [&](std::string message) {
    outcome.violations.push_back({"", "mediaType", std::move(message)});
    return outcome;
  };
  if (!v.is_string()) return fail("rich value must be a URI string");
  const auto& text = v.get_ref<const std::string&>();
  if (!is_valid_uri(text)) return fail("rich value is not a valid URI");

  std::string expected = normalize_media_type(media_type);
  std::string scheme = split_uri(text).scheme;
  if (scheme == "data") {
    std::string actual;
    try {
      actual = parse_data_uri(text).media_type;
    } catch (const Error& e) {
      return fail(std::string("malformed data URI: ") + e.what());
    }
    if (normalize_media_type(actual) != expected) {
      return fail("data URI has media type " + actual + ", expected " + expected);
    }
    return outcome;
  }
  if (scheme == "http" || scheme == "https") {
    if (resolver == nullptr) return fail("cannot verify media type of " + text + ": no resolver");
    std::string actual;
    try {
      actual = resolver->content_type(text);
    } catch (const std::exception& e) {
      return fail("cannot verify media type of " + text + ": " + e.what());
    }
    if (normalize_media_type(actual) != expected) {
      return fail(text + " serves " + normalize_media_type(actual) + ", expected " + expected);
    }
    return outcome;
  }
  return fail("unsupported URI scheme \"" + scheme + "\" for a rich value");
}

}  // namespace psi
