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


// Independent reference implementations used as test oracles. They share no
// code with the library beyond the Value type.

#ifndef PSI_TESTS_ORACLES_HPP
#define PSI_TESTS_ORACLES_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "psi/value.hpp"

namespace oracle {

using psi::Value;

inline bool same(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
  if (a.type() != b.type()) return false;
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!same(a[i], b[i])) return false;
    }
    return true;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it) {
      auto jt = b.find(it.key());
      if (jt == b.end() || !same(*it, *jt)) return false;
    }
    return true;
  }
  return a == b;
}

inline bool is_type(const Value& v, const std::string& t) {
  if (t == "integer") return v.is_number() && std::floor(v.get<double>()) == v.get<double>();
  if (t == "number") return v.is_number();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "array") return v.is_array();
  if (t == "object") return v.is_object();
  return false;
}

/// Reads every constraint of a compiled schema one at a time and gives up on
/// the first failure.
inline bool naive_valid(const Value& v, const Value& s) {
  if (s.is_boolean()) return s.get<bool>();
  if (!s.is_object()) return same(v, s);

  if (s.contains("type")) {
    const Value& t = s["type"];
    bool any = false;
    if (t.is_string()) any = is_type(v, t.get<std::string>());
    if (t.is_array()) {
      for (const auto& x : t) any = any || is_type(v, x.get<std::string>());
    }
    if (!any) return false;
  }
  if (v.is_number()) {
    if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>()) return false;
    if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>()) return false;
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || same(v, e);
    if (!found) return false;
  }
  if (s.contains("allOf")) {
    for (const auto& b : s["allOf"]) {
      if (!naive_valid(v, b)) return false;
    }
  }
  if (s.contains("oneOf")) {
    int hits = 0;
    for (const auto& b : s["oneOf"]) hits += naive_valid(v, b) ? 1 : 0;
    if (hits != 1) return false;
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) return false;
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) return false;
    if (s.contains("items")) {
      const Value& items = s["items"];
      if (items.is_array()) {
        if (items.size() != v.size()) return false;
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (!naive_valid(v[i], items[i])) return false;
        }
      } else {
        for (const auto& x : v) {
          if (!naive_valid(x, items)) return false;
        }
      }
    }
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto& r : s["required"]) {
        if (!v.contains(r.get<std::string>())) return false;
      }
    }
    Value props = s.contains("properties") ? s["properties"] : Value::object();
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        if (!naive_valid(*it, props[it.key()])) return false;
      } else if (s.contains("additionalProperties")) {
        if (!naive_valid(*it, s["additionalProperties"])) return false;
      }
    }
  }
  return true;
}

/// Media type of a data URI per RFC 2397: "data:" [mediatype] [";base64"] ","
/// with "text/plain" when the type is omitted.
inline std::string rfc2397_media_type(const std::string& uri) {
  std::string rest = uri.substr(5);
  if (rest.rfind("//", 0) == 0) rest = rest.substr(2);
  std::size_t comma = rest.find(',');
  if (comma == std::string::npos) return "";
  std::string header = rest.substr(0, comma);
  std::string type = header.substr(0, header.find(';'));
  std::string lower;
  for (char c : type) {
    if (c != ' ' && c != '\t') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower.find('/') == std::string::npos) return "text/plain";
  return lower;
}

struct LabeledPoint {
  std::vector<double> x;
  std::string label;
};

/// All-pairs k-NN: every point within the k-th smallest distance votes; a
/// vote tie goes to the tied label whose nearest voter was stored first.
inline std::string brute_knn(const std::vector<LabeledPoint>& points, const std::vector<double>& q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < q.size(); ++j) sum += (points[i].x[j] - q[j]) * (points[i].x[j] - q[j]);
    d.emplace_back(sum, i);
  }
  std::sort(d.begin(), d.end());
  double cutoff = d[std::min(k, d.size()) - 1].first;
  std::map<std::string, int> votes;
  std::map<std::string, std::size_t> nearest;  // label -> stored index of its nearest voter
  for (const auto& [dist, i] : d) {
    if (dist > cutoff) break;
    const std::string& label = points[i].label;
    if (votes[label]++ == 0) nearest[label] = i;
  }
  int best = 0;
  for (const auto& [label, n] : votes) best = std::max(best, n);
  std::string winner;
  std::size_t winner_index = points.size();
  for (const auto& [label, n] : votes) {
    if (n == best && nearest[label] < winner_index) {
      winner = label;
      winner_index = nearest[label];
    }
  }
  return winner;
}

/// Fold `fold` of `k` over 1..n by walking fold, fold + k, ...
inline std::vector<std::size_t> fold_members(std::size_t n, std::size_t fold, std::size_t k, bool invert) {
  std::vector<bool> in(n + 1, false);
  for (std::size_t i = fold; i <= n; i += k) in[i] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= n; ++i) {
    if (in[i] != invert) out.push_back(i);
  }
  return out;
}

/// Random compiled schemas and candidate values of bounded depth.
class Generator {
 public:
  explicit Generator(unsigned seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin() { return pick(2) == 0; }

  Value atom() {
    switch (pick(6)) {
      case 0: return Value(pick(21) - 10);
      case 1: return Value((pick(41) - 20) / 4.0);
      case 2: return Value(coin());
      case 3: return Value(std::string(1, static_cast<char>('a' + pick(3))));
      case 4: return Value(static_cast<double>(pick(5)));
      default: return Value(pick(3));
    }
  }

  Value value(int depth) {
    if (depth <= 0 || pick(3) == 0) return atom();
    if (coin()) {
      Value a = Value::array();
      for (int i = pick(4); i > 0; --i) a.push_back(value(depth - 1));
      return a;
    }
    Value o = Value::object();
    for (int i = pick(4); i > 0; --i) o[std::string(1, static_cast<char>('p' + pick(4)))] = value(depth - 1);
    return o;
  }

  Value schema(int depth) {
    static const char* kTypes[] = {"integer", "number", "string", "boolean", "array", "object"};
    Value s = Value::object();
    int shape = depth <= 0 ? pick(3) : pick(9);
    switch (shape) {
      case 0:
        s["type"] = kTypes[pick(6)];
        break;
      case 1:
        s["type"] = coin() ? "integer" : "number";
        if (coin()) s["minimum"] = pick(11) - 5;
        if (coin()) s["maximum"] = (pick(21) - 5) / 2.0;
        break;
      case 2: {
        Value e = Value::array();
        for (int i = pick(3) + 1; i > 0; --i) e.push_back(atom());
        s["enum"] = e;
        break;
      }
      case 3:
        s["type"] = "array";
        if (coin()) s["minItems"] = pick(3);
        if (coin()) s["maxItems"] = pick(3) + 1;
        s["items"] = schema(depth - 1);
        break;
      case 4: {
        s["type"] = "array";
        Value items = Value::array();
        for (int i = pick(3); i > 0; --i) items.push_back(schema(depth - 1));
        s["items"] = items;
        break;
      }
      case 5: {
        s["type"] = "object";
        Value props = Value::object();
        Value req = Value::array();
        for (int i = pick(3) + 1; i > 0; --i) {
          std::string key(1, static_cast<char>('p' + pick(4)));
          props[key] = schema(depth - 1);
          if (coin() && std::find(req.begin(), req.end(), Value(key)) == req.end()) req.push_back(key);
        }
        s["properties"] = props;
        if (!req.empty()) s["required"] = req;
        if (pick(3) == 0) s["additionalProperties"] = coin() ? Value(false) : schema(depth - 1);
        break;
      }
      case 6:
        s["allOf"] = Value::array({schema(depth - 1), schema(depth - 1)});
        break;
      case 7:
        s["oneOf"] = Value::array({schema(depth - 1), schema(depth - 1)});
        break;
      default:
        s["type"] = Value::array({kTypes[pick(6)], kTypes[pick(6)]});
        break;
    }
    if (pick(5) == 0) s["description"] = "generated";
    return s;
  }

  /// A value shaped after `s` so that roughly half of the pairs validate.
  Value value_for(const Value& s, int depth) {
    if (!s.is_object() || pick(4) == 0) return value(depth);
    if (s.contains("enum") && !s["enum"].empty() && coin()) return s["enum"][pick(static_cast<int>(s["enum"].size()))];
    if (s.contains("allOf") || s.contains("oneOf")) {
      const Value& branches = s.contains("allOf") ? s["allOf"] : s["oneOf"];
      return value_for(branches[pick(static_cast<int>(branches.size()))], depth);
    }
    std::string type = s.contains("type") && s["type"].is_string() ? s["type"].get<std::string>() : "";
    if (type == "array" && depth > 0) {
      Value a = Value::array();
      if (s.contains("items") && s["items"].is_array()) {
        for (const auto& item : s["items"]) a.push_back(value_for(item, depth - 1));
        if (pick(6) == 0) a.push_back(atom());
      } else {
        for (int i = pick(4); i > 0; --i) a.push_back(value_for(s.value("items", Value::object()), depth - 1));
      }
      return a;
    }
    if (type == "object" && depth > 0) {
      Value o = Value::object();
      if (s.contains("properties")) {
        for (const auto& [key, sub] : s["properties"].items()) {
          if (pick(4) != 0) o[key] = value_for(sub, depth - 1);
        }
      }
      if (pick(4) == 0) o["z"] = atom();
      return o;
    }
    if (type == "integer" || type == "number") {
      return pick(3) == 0 ? Value((pick(21) - 10) / 2.0) : Value(pick(21) - 10);
    }
    if (type == "string") return Value(std::string(1, static_cast<char>('a' + pick(3))));
    if (type == "boolean") return Value(coin());
    return value(depth);
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace oracle

#endif  // PSI_TESTS_ORACLES_HPP
