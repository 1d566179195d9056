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


#include <gtest/gtest.h>

#include "oracles.hpp"
#include "psi/compiler.hpp"
#include "psi/error.hpp"
#include "psi/schema_lang.hpp"
#include "psi/validator.hpp"

namespace psi {
namespace {

void expect_key(std::string_view key, KeyKind kind, const std::string& name) {
  ConstraintKey k = classify_key(key);
  EXPECT_EQ(k.kind, kind) << key;
  EXPECT_EQ(k.name, name) << key;
}

TEST(ClassifyKey, PropertyForms) {
  expect_key("/sepal", KeyKind::kMandatory, "sepal");
  expect_key("?invert", KeyKind::kOptional, "invert");
  expect_key("/psiType=", KeyKind::kMandatoryValue, "psiType");
  expect_key("?description=", KeyKind::kOptionalValue, "description");
  expect_key("/*", KeyKind::kAdditionalProperties, "*");
  expect_key("#address", KeyKind::kLocalDefinition, "address");
  expect_key("$array", KeyKind::kReference, "array");
}

TEST(ClassifyKey, KeywordsIncludingRefAndSchema) {
  for (const char* k : {"type", "minimum", "enum", "allOf", "oneOf", "items", "allItems", "$ref", "$schema", "a/b",
                        "x?", "max="}) {
    EXPECT_EQ(classify_key(k).kind, KeyKind::kKeyword) << k;
  }
}

TEST(ClassifyKey, EmptyNamesAreMalformed) {
  for (const char* k : {"/", "?", "/=", "?=", "#", "$"}) {
    EXPECT_THROW(classify_key(k), Error) << k;
  }
}

TEST(ClassifyKey, PredicatesAgreeWithKind) {
  oracle::Generator gen(3);
  const std::string alphabet = "/?=*#$ab";
  for (int i = 0; i < 2000; ++i) {
    std::string key;
    for (int n = gen.pick(5) + 1; n > 0; --n) key.push_back(alphabet[gen.pick(static_cast<int>(alphabet.size()))]);
    ConstraintKey k;
    try {
      k = classify_key(key);
    } catch (const Error&) {
      continue;
    }
    bool property = k.kind == KeyKind::kMandatory || k.kind == KeyKind::kOptional ||
                    k.kind == KeyKind::kMandatoryValue || k.kind == KeyKind::kOptionalValue;
    EXPECT_EQ(k.is_property(), property) << key;
    if (k.is_required()) {
      EXPECT_EQ(key.front(), '/') << key;
    }
    if (k.is_value_form()) {
      EXPECT_EQ(key.back(), '=') << key;
    }
  }
}

TEST(References, ScopeFollowsUriScheme) {
  EXPECT_EQ(parse_reference("$integer").scope, ReferenceScope::kLocal);
  Reference g = parse_reference("$http://example.org/data/iris/array1");
  EXPECT_EQ(g.scope, ReferenceScope::kGlobal);
  EXPECT_EQ(g.address, "http://example.org/data/iris/array1");
  EXPECT_FALSE(is_reference_string("$ref"));
  EXPECT_FALSE(is_reference_string("$schema"));
  EXPECT_TRUE(is_reference_string("$number"));
  EXPECT_THROW(parse_reference("$"), Error);
}

TEST(RichType, MediaTypeAfterAt) {
  EXPECT_EQ(parse_rich_type("@image/jpeg"), "image/jpeg");
  EXPECT_EQ(parse_rich_type("@text/plain"), "text/plain");
  EXPECT_THROW(parse_rich_type("@"), Error);
}

TEST(Compose, ArrayComposition) {
  Value s = compose_array({parse_json(R"({"/age":"$integer"})"), Value("$boolean")});
  EXPECT_EQ(serialize_json(s), R"({"type":"array","items":[{"/age":"$integer"},"$boolean"]})");
  EXPECT_EQ(serialize_json(compose_array({})), R"({"type":"array","items":[]})");
}

TEST(Compose, FourNumbersMatchArraySugarAfterCompilation) {
  ResolutionContext ctx;
  Value composed = compose_array({"$number", "$number", "$number", "$number"});
  Value sugar = parse_json(R"({ "$array": { "items": [ "$number", "$number", "$number", "$number" ] } })");
  EXPECT_TRUE(json_equal(compile(composed, ctx), compile(sugar, ctx)));
}

TEST(Compose, ObjectComposition) {
  Value s = compose_object({"stats", "alive"}, {parse_json(R"({"/age":"$integer"})"), Value("$boolean")});
  EXPECT_EQ(serialize_json(s), R"({"/stats":{"/age":"$integer"},"/alive":"$boolean"})");
  EXPECT_EQ(serialize_json(compose_object({}, {})), "{}");
  EXPECT_EQ(serialize_json(compose_object({"length", "width"}, {"$number", "$number"})),
            R"({"/length":"$number","/width":"$number"})");
}

TEST(Compose, ObjectCompositionRejectsBadKeys) {
  EXPECT_THROW(compose_object({"a", "a"}, {"$number", "$number"}), Error);
  EXPECT_THROW(compose_object({"a"}, {}), Error);
}

// Brute force over a small value universe: v is valid for the array
// composition iff it is an array of |S| items, item i valid for S[i].
TEST(Compose, ArrayCompositionSemanticsByEnumeration) {
  ResolutionContext ctx;
  const std::vector<Value> parts = {"$integer", "$string", parse_json(R"({"$number":{"min":0}})"), "$boolean"};
  const std::vector<Value> atoms = {Value(1), Value(-1.5), Value("a"), Value(true), Value(0)};
  std::vector<Value> universe;
  for (const auto& a : atoms) universe.push_back(Value::array({a}));
  for (const auto& a : atoms) {
    for (const auto& b : atoms) universe.push_back(Value::array({a, b}));
  }
  universe.push_back(Value::array());
  universe.push_back(Value(3));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      std::vector<Value> s = {parts[i], parts[j]};
      Value compiled = compile(compose_array(s), ctx);
      for (const auto& v : universe) {
        bool expected = v.is_array() && v.size() == 2 && validate(v[0], compile(s[0], ctx)).valid() &&
                        validate(v[1], compile(s[1], ctx)).valid();
        EXPECT_EQ(validate(v, compiled).valid(), expected) << serialize_json(v) << " vs " << serialize_json(compiled);
      }
    }
  }
}

TEST(Compose, ObjectCompositionSemanticsByEnumeration) {
  ResolutionContext ctx;
  const std::vector<Value> parts = {"$integer", "$string", "$boolean"};
  const std::vector<Value> atoms = {Value(2), Value("x"), Value(false)};
  for (const auto& sa : parts) {
    for (const auto& sb : parts) {
      Value compiled = compile(compose_object({"a", "b"}, {sa, sb}), ctx);
      for (const auto& va : atoms) {
        for (const auto& vb : atoms) {
          Value full = {{"a", va}, {"b", vb}};
          bool expected = validate(va, compile(sa, ctx)).valid() && validate(vb, compile(sb, ctx)).valid();
          EXPECT_EQ(validate(full, compiled).valid(), expected);
          EXPECT_FALSE(validate(Value{{"a", va}}, compiled).valid());
        }
      }
    }
  }
}

}  // namespace
}  // namespace psi
