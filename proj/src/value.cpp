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

#include "psi/value.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "psi/error.hpp"

namespace psi {
namespace {

// Builds a Value from SAX events, refusing the parts of JSON that are not
// part of the PSI value universe.
class StrictBuilder : public nlohmann::json_sax<Value> {
 public:
  Value result;
  std::string failure;
  bool syntax_failure = false;
  std::size_t failure_offset = 0;

  bool null() override {
    failure = "null is not a PSI value";
    return false;
  }
  bool boolean(bool val) override { return emit(Value(val)); }
  bool number_integer(number_integer_t val) override { return emit(Value(val)); }
  bool number_unsigned(number_unsigned_t val) override {
    if (val <= static_cast<number_unsigned_t>(std::numeric_limits<std::int64_t>::max())) {
      return emit(Value(static_cast<std::int64_t>(val)));
    }
    return emit(Value(static_cast<double>(val)));
  }
  bool number_float(number_float_t val, const string_t&) override {
    return emit(Value(val));
  }
  bool string(string_t& val) override { return emit(Value(std::move(val))); }
  bool binary(binary_t&) override {
    failure = "binary values are not supported";
    return false;
  }

  bool start_object(std::size_t) override {
    if (!emit(Value::object())) return false;
    stack_.push_back(last_);
    return true;
  }
  bool key(string_t& val) override {
    Value* obj = stack_.back();
    if (obj->contains(val)) {
      failure = "duplicate object key \"" + val + "\"";
      return false;
    }
    pending_key_ = std::move(val);
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    if (!emit(Value::array())) return false;
    stack_.push_back(last_);
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    return true;
  }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    syntax_failure = true;
    failure_offset = position;
    failure = ex.what();
    return false;
  }

 private:
  bool emit(Value v) {
    if (stack_.empty()) {
      result = std::move(v);
      last_ = &result;
      return true;
    }
    Value* parent = stack_.back();
    if (parent->is_array()) {
      parent->push_back(std::move(v));
      last_ = &parent->back();
    } else {
      auto [it, inserted] = parent->get_ref<Value::object_t&>().emplace(pending_key_, std::move(v));
      last_ = &it->second;
    }
    return true;
  }

  std::vector<Value*> stack_;
  Value* last_ = nullptr;
  std::string pending_key_;
};

bool object_equal(const Value& a, const Value& b, bool numeric_loose) {
  if (a.size() != b.size()) return false;
  for (const auto& [key, value] : a.items()) {
    auto it = b.find(key);
    if (it == b.end()) return false;
    if (numeric_loose ? !json_equal(value, *it) : !identical(value, *it)) return false;
  }
  return true;
}

}  // namespace

ValueKind kind_of(const Value& v) noexcept {
  switch (v.type()) {
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned:
      return ValueKind::kInteger;
    case Value::value_t::number_float:
      return ValueKind::kNumber;
    case Value::value_t::string:
      return ValueKind::kText;
    case Value::value_t::boolean:
      return ValueKind::kFlag;
    case Value::value_t::array:
      return ValueKind::kSequence;
    case Value::value_t::object:
      return ValueKind::kMapping;
    default:
      return ValueKind::kNull;
  }
}

bool is_integral(const Value& v) noexcept {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  double d = v.get<double>();
  return std::isfinite(d) && std::floor(d) == d;
}

double as_double(const Value& v) {
  if (!v.is_number()) throw Error(ErrorCode::kBadRequest, "expected a number");
  return v.get<double>();
}

Value parse_json(std::string_view text) {
  StrictBuilder builder;
  bool ok = Value::sax_parse(text.begin(), text.end(), &builder,
                             nlohmann::detail::input_format_t::json, true);
  if (!ok) {
    if (builder.syntax_failure) {
      throw Error(ErrorCode::kSyntax,
                  "JSON syntax error at byte " + std::to_string(builder.failure_offset),
                  builder.failure);
    }
    throw Error(ErrorCode::kSyntax, builder.failure);
  }
  return std::move(builder.result);
}

std::string serialize_json(const Value& v) {
  return v.dump(-1, ' ', false, Value::error_handler_t::replace);
}

std::string serialize_json_pretty(const Value& v) {
  return v.dump(2, ' ', false, Value::error_handler_t::replace);
}

bool identical(const Value& a, const Value& b) {
  ValueKind ka = kind_of(a);
  if (ka != kind_of(b)) return false;
  switch (ka) {
    case ValueKind::kInteger:
      return a.get<std::int64_t>() == b.get<std::int64_t>();
    case ValueKind::kNumber: {
      double x = a.get<double>(), y = b.get<double>();
      return x == y || (std::isnan(x) && std::isnan(y));
    }
    case ValueKind::kSequence: {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!identical(a[i], b[i])) return false;
      }
      return true;
    }
    case ValueKind::kMapping:
      return object_equal(a, b, false);
    default:
      return a == b;
  }
}

bool json_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (a.is_number_integer() && b.is_number_integer()) {
      return a.get<std::int64_t>() == b.get<std::int64_t>();
    }
    return a.get<double>() == b.get<double>();
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!json_equal(a[i], b[i])) return false;
    }
    return true;
  }
  if (a.is_object() && b.is_object()) return object_equal(a, b, true);
  if (a.type() != b.type()) return false;
  return a == b;
}

}  // namespace psi
