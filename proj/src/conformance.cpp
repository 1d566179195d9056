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


#include "psi/conformance.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "psi/compiler.hpp"
#include "psi/error.hpp"
#include "psi/manifest.hpp"
#include "psi/service.hpp"
#include "psi/uri.hpp"
#include "psi/validator.hpp"

namespace psi {
namespace {

constexpr const char* kIrisDescription = "The iris data set, courtesy of Sir R. A. Fisher";
constexpr const char* kKnnDescription = "A k-nearest neighbour algorithm that takes feature vectors as input";
constexpr const char* kSquareDescription = "Calculates the square of a number";
constexpr const char* kImageLearnerDescription = "Supervised classifier of JPEG images using colour and shape information";

const char* const kRetailerManifest = R"json({
  "name": "irises",
  "description": "Irises in stock",
  "rows": "sepal_length,sepal_width,petal_length,petal_width\n5.1,3.5,1.4,0.2\n7.0,3.2,4.7,1.4\n6.3,3.3,6.0,2.5\n",
  "columns": [
    {"name": "sepal_length", "type": "number"},
    {"name": "sepal_width", "type": "number"},
    {"name": "petal_length", "type": "number"},
    {"name": "petal_width", "type": "number"}
  ],
  "attributes": [
    {
      "name": "dimensions",
      "description": "Petal and sepal dimensions as [ sepal length, sepal width, petal length, petal width ]",
      "default": true,
      "tree": ["sepal_length", "sepal_width", "petal_length", "petal_width"]
    }
  ]
})json";

const char* const kFlowerEmits = R"json({
  "/sepal": { "/length": "$number", "/width": "$number" },
  "/petal": { "/length": "$number", "/width": "$number" },
  "/species": { "$string": { "enum": [ "setosa", "versicolor", "virginica" ] } }
})json";

const char* const kFoldQuerySchema = R"json({
  "description": "Select subset 'fold' of 'numfolds' total subsets of instances. Use 'invert=true' to select every other fold.",
  "/fold": { "$integer": { "min": 1, "title": "Fold number", "description": "≤ number of folds" } },
  "/numfolds": { "$integer": { "min": 1, "title": "Total folds" } },
  "?invert": { "$boolean": { "title": "Invert selection" } }
})json";

const char* const kKnnTaskSchema = R"json({
  "?k": { "$integer": { "default": 1, "min": 1,
    "description": "The number of nearest neighbours to examine" } },
  "/resources": {
    "/target": { "$nominalAttribute": { "allItems": "$string" } },
    "/source": { "$arrayAttribute": { "allItems": "$atomicValueSchema" } }
  }
})json";

const char* const kImageTaskSchema = R"json({
  "/resources": {
    "/target": { "$nominalAttribute": { "allItems": "$string" } },
    "/source": { "$richValueAttribute": { "mediaType": "image/jpeg" } }
  }
})json";

const char* const kFeatureVector = R"json({ "$array": { "items": [ "$number", "$number", "$number", "$number" ] } })json";
const char* const kSpecies = R"json({ "$string": { "enum": [ "setosa", "versicolor", "virginica" ] } })json";

std::string brief(const Value& v) {
  std::string text = serialize_json(v);
  if (text.size() > 160) text = text.substr(0, 157) + "...";
  return text;
}

bool near(const Value& a, const Value& b, double tol) {
  if (a.is_number() && b.is_number()) return std::fabs(a.get<double>() - b.get<double>()) <= tol;
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!near(a[i], b[i], tol)) return false;
    }
    return true;
  }
  if (a.is_object() && b.is_object()) {
    if (a.size() != b.size()) return false;
    for (const auto& [key, v] : a.items()) {
      if (!b.contains(key) || !near(v, b[key], tol)) return false;
    }
    return true;
  }
  return json_equal(a, b);
}

struct Reply {
  int status = 0;
  Value body;
  std::string location;
};

struct Check {
  bool pass = false;
  std::string actual;
};

class Harness {
 public:
  Harness(std::shared_ptr<Transport> net, double tol) : net_(std::move(net)), tol_(tol) {}

  ConformanceReport report;

  void step(std::string name, std::string expected, const std::function<Check()>& body) {
    ConformanceStep s;
    s.name = std::move(name);
    s.expected = std::move(expected);
    calls_.clear();
    try {
      Check c = body();
      s.pass = c.pass;
      s.actual = std::move(c.actual);
    } catch (const std::exception& e) {
      s.pass = false;
      s.actual = std::string("error: ") + e.what();
    }
    if (!calls_.empty()) {
      s.request = calls_.front();
      if (calls_.size() > 1) s.request += " (+" + std::to_string(calls_.size() - 1) + " more)";
    }
    report.steps.push_back(std::move(s));
  }

  Reply call(const std::string& method, const std::string& uri, const Value* body = nullptr) {
    calls_.push_back(method + " " + uri);
    HttpRequest request{method, uri, body != nullptr ? serialize_json(*body) : std::string()};
    HttpResponse response = net_->send(request);
    Reply r;
    r.status = response.status;
    r.location = response.location;
    if (!response.body.empty()) r.body = parse_json(response.body);
    return r;
  }

  Value get_ok(const std::string& uri) {
    Reply r = call("GET", uri);
    if (r.status != 200) {
      std::string message = r.body.is_object() && r.body.contains("message") ? r.body["message"].get<std::string>() : "";
      throw Error(ErrorCode::kResolutionIo, "GET " + uri + " returned " + std::to_string(r.status) + " " + message);
    }
    return r.body;
  }

  /// First member of the collection whose representation satisfies `pred`.
  std::optional<std::string> find_in(const std::string& collection, const std::function<bool(const Value&)>& pred) {
    Value list = get_ok(collection);
    for (const auto& uri : list.at("resources")) {
      Value rep = get_ok(uri.get<std::string>());
      if (pred(rep)) return uri.get<std::string>();
    }
    return std::nullopt;
  }

  void use_schema_root(const std::string& schema_root) {
    auto remote = std::make_shared<TransportSchemaFetcher>(net_);
    ctx_ = ResolutionContext(std::make_shared<PredefinedFetcher>(schema_root, remote), schema_root);
  }

  Value compile_schema(const Value& s) const { return compile(s, ctx_); }
  bool same_schema(const Value& a, const Value& b) const {
    return json_equal(compile_schema(a), compile_schema(b));
  }

  /// The representation with its schema-valued fields compiled, ready for
  /// checking against the predefined resource schemas.
  Value compiled_rep(const Value& rep) const {
    Value out = rep;
    for (const char* field : {"emits", "accepts", "querySchema"}) {
      if (out.contains(field)) out[field] = compile(out[field], ctx_, CompileOptions{false, nullptr});
    }
    return out;
  }

  Check conforms(const Value& rep, const Value& psi_schema) const {
    ValidationOptions options;
    options.check_rich = true;
    ValidationOutcome outcome = validate(compiled_rep(rep), compile_schema(psi_schema), options);
    return {outcome.valid(), outcome.valid() ? "conforms" : outcome.describe()};
  }

  double tol() const { return tol_; }

 private:
  std::shared_ptr<Transport> net_;
  double tol_;
  ResolutionContext ctx_;
  std::vector<std::string> calls_;
};

template <class T>
const T& need(const std::optional<T>& v, const char* what) {
  if (!v) throw Error(ErrorCode::kBadRequest, std::string("skipped: no ") + what + " from an earlier step");
  return *v;
}

std::string text_of(const Value& rep, const char* key) {
  return rep.is_object() && rep.contains(key) && rep[key].is_string() ? rep[key].get<std::string>() : std::string();
}

Check status_is(const Reply& r, int expected) {
  return {r.status == expected, std::to_string(r.status) + (r.location.empty() ? "" : " Location: " + r.location)};
}

std::string with_value(const std::string& uri, const std::string& json) {
  return append_query(uri, encode_query({{"value", json}}));
}

}  // namespace

std::size_t ConformanceReport::passed() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.pass ? 1 : 0;
  return n;
}

std::size_t ConformanceReport::failed() const { return steps.size() - passed(); }

const ConformanceStep* ConformanceReport::find(const std::string& name) const {
  for (const auto& s : steps) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string ConformanceReport::to_text() const {
  std::string out;
  for (const auto& s : steps) {
    if (s.pass) {
      out += "PASS " + s.name + "\n";
    } else {
      out += "FAIL " + s.name + ": expected " + s.expected + ", got " + s.actual + "\n";
      if (!s.request.empty()) out += "     request: " + s.request + "\n";
    }
  }
  out += std::to_string(passed()) + " passed, " + std::to_string(failed()) + " failed\n";
  return out;
}

Value ConformanceReport::to_json() const {
  Value out = Value::object();
  Value list = Value::array();
  for (const auto& s : steps) {
    list.push_back(Value{{"name", s.name}, {"request", s.request}, {"expected", s.expected},
                         {"actual", s.actual}, {"pass", s.pass}});
  }
  out["steps"] = std::move(list);
  out["passed"] = passed();
  out["failed"] = failed();
  return out;
}

ConformanceReport run_conformance(const std::string& entry, ConformanceOptions options) {
  std::shared_ptr<Transport> upstream = options.transport;
  if (!upstream) upstream = std::make_shared<HttpClientTransport>();
  auto net = std::make_shared<LocalTransport>(upstream);
  Harness h(net, options.tolerance);

  std::unique_ptr<Service> retailer;
  try {
    ServiceOptions ro;
    ro.base_uri = options.retailer_origin;
    ro.profile = Profile::kDataOnly;
    ro.transport = net;
    retailer = std::make_unique<Service>(std::move(ro));
    Manifest m = parse_manifest(parse_json(kRetailerManifest), ".");
    retailer->add_relation(m, ingest(m));
  } catch (const std::exception& e) {
    h.report.steps.push_back({"retailer-setup", "", "in-process retailer service", e.what(), false});
  }

  std::optional<Value> service;
  std::optional<std::string> relation, flower, species, sepal_length, square, joined, knn, array1, predictor,
      predictor1, image, retailer_attribute, predicted;
  std::optional<Value> relation_rep, flower_rep, task, predictor_rep;

  // Discovery.
  h.step("discover", "200 service with collection URIs", [&]() -> Check {
    Value rep = h.get_ok(entry);
    bool ok = text_of(rep, "psiType") == "service";
    for (const char* c : {"relations", "schema", "learners", "predictors", "transformers"}) {
      ok = ok && !text_of(rep, c).empty();
    }
    if (ok) {
      service = rep;
      h.use_schema_root(text_of(rep, "schema"));
    }
    return {ok, brief(rep)};
  });
  h.step("relations-list", "resource-list containing the iris relation", [&]() -> Check {
    const Value& svc = need(service, "service");
    relation = h.find_in(text_of(svc, "relations"),
                         [](const Value& rep) { return text_of(rep, "description") == kIrisDescription; });
    return {relation.has_value(), relation.value_or("no relation described as \"" + std::string(kIrisDescription) + "\"")};
  });

  // Relation and default attribute.
  h.step("relation", "size 150, default attribute plus 3 attributes", [&]() -> Check {
    Value rep = h.get_ok(need(relation, "relation"));
    bool ok = text_of(rep, "psiType") == "relation" && rep.value("size", Value(0)) == Value(150) &&
              !text_of(rep, "defaultAttribute").empty() && rep.contains("attributes") &&
              rep["attributes"].size() == 3 && rep.contains("querySchema");
    if (ok) {
      relation_rep = rep;
      flower = text_of(rep, "defaultAttribute");
    }
    return {ok, brief(rep)};
  });
  h.step("relation-conforms", "relation representation valid for $relation", [&]() -> Check {
    return h.conforms(need(relation_rep, "relation"), Value("$relation"));
  });
  h.step("default-attribute", "flower attribute with sepal/petal/species", [&]() -> Check {
    Value rep = h.get_ok(need(flower, "default attribute"));
    bool ok = text_of(rep, "psiType") == "attribute" && text_of(rep, "relation") == *relation &&
              text_of(rep, "description") == "A structured attribute for presenting iris dimensions" &&
              h.same_schema(rep.at("emits"), parse_json(kFlowerEmits)) && rep.contains("subattributes");
    for (const char* part : {"sepal", "petal", "species"}) ok = ok && rep["subattributes"].contains(part);
    if (ok) {
      flower_rep = rep;
      species = rep["subattributes"]["species"].get<std::string>();
    }
    return {ok, brief(rep)};
  });
  h.step("attribute-conforms", "flower representation valid for $attribute", [&]() -> Check {
    return h.conforms(need(flower_rep, "default attribute"), Value("$attribute"));
  });
  h.step("petal-subattribute", "emits {length, width} numbers", [&]() -> Check {
    Value rep = h.get_ok(need(flower_rep, "default attribute")["subattributes"]["petal"].get<std::string>());
    bool ok = h.same_schema(rep.at("emits"), parse_json(R"({ "/length": "$number", "/width": "$number" })")) &&
              rep.at("subattributes").contains("length") && rep["subattributes"].contains("width");
    return {ok, brief(rep)};
  });
  h.step("instance-1", "{sepal:{5.1,3.5}, petal:{1.4,0.2}, species:setosa}", [&]() -> Check {
    Value rep = h.get_ok(append_query(need(flower, "default attribute"), "instance=1"));
    Value expected = parse_json(
        R"({"sepal":{"length":5.1,"width":3.5},"petal":{"length":1.4,"width":0.2},"species":"setosa"})");
    return {text_of(rep, "psiType") == "value" && near(rep.at("value"), expected, h.tol()), brief(rep)};
  });
  h.step("species-all", "150 labels, 50 of each, setosa first and virginica last", [&]() -> Check {
    Value list = h.get_ok(append_query(need(species, "species attribute"), "instance=all")).at("valueList");
    std::map<std::string, int> counts;
    for (const auto& v : list) counts[v.get<std::string>()]++;
    bool ok = list.size() == 150 && list.front() == "setosa" && list.back() == "virginica" &&
              counts["setosa"] == 50 && counts["versicolor"] == 50 && counts["virginica"] == 50;
    return {ok, std::to_string(list.size()) + " labels"};
  });

  // Folds.
  std::optional<Value> fold_rep;
  h.step("query-schema", "fold query schema", [&]() -> Check {
    const Value& qs = need(relation_rep, "relation").at("querySchema");
    return {json_equal(qs, parse_json(kFoldQuerySchema)), brief(qs)};
  });
  h.step("fold-size", "size 30 and fold-qualified attribute URIs", [&]() -> Check {
    Value rep = h.get_ok(append_query(need(relation, "relation"), "fold=2&numfolds=5"));
    bool ok = rep.value("size", Value(0)) == Value(30) &&
              text_of(rep, "description") == std::string(kIrisDescription) + " (fold 2 of 5)" &&
              text_of(rep, "defaultAttribute") != *flower && rep.at("attributes").size() == 3;
    if (ok) fold_rep = rep;
    return {ok, brief(rep)};
  });
  h.step("fold-instance-1", "sepal {4.9, 3.0}", [&]() -> Check {
    Value rep = h.get_ok(append_query(text_of(need(fold_rep, "folded relation"), "defaultAttribute"), "instance=1"));
    Value expected = parse_json(
        R"({"sepal":{"length":4.9,"width":3.0},"petal":{"length":1.4,"width":0.2},"species":"setosa"})");
    return {near(rep.at("value"), expected, h.tol()), brief(rep)};
  });

  // Transformers.
  h.step("transformers-list", "a squaring transformer", [&]() -> Check {
    square = h.find_in(text_of(need(service, "service"), "transformers"),
                       [](const Value& rep) { return text_of(rep, "description") == kSquareDescription; });
    return {square.has_value(), square.value_or("none")};
  });
  h.step("square-representation", "accepts and emits $number, with provenance", [&]() -> Check {
    Value rep = h.get_ok(need(square, "square transformer"));
    bool ok = text_of(rep, "psiType") == "transformer" && rep.at("accepts") == "$number" &&
              rep.at("emits") == "$number" && rep.contains("provenance") &&
              rep["provenance"].contains("created") && rep["provenance"].contains("createdBy");
    return {ok, brief(rep)};
  });
  h.step("square-apply", "16.0", [&]() -> Check {
    Value rep = h.get_ok(with_value(need(square, "square transformer"), "4"));
    return {near(rep.at("value"), Value(16.0), 0.0), brief(rep)};
  });
  h.step("join-square", "201 with Location", [&]() -> Check {
    Value sepal = h.get_ok(need(flower_rep, "default attribute")["subattributes"]["sepal"].get<std::string>());
    sepal_length = sepal.at("subattributes").at("length").get<std::string>();
    Value body = {{"psiType", "composition"}, {"join", need(square, "square transformer")}};
    Reply r = h.call("POST", *sepal_length, &body);
    if (r.status == 201 && !r.location.empty()) joined = r.location;
    return status_is(r, 201);
  });
  h.step("join-square-again", "302 with the same Location", [&]() -> Check {
    Value body = {{"psiType", "composition"}, {"join", need(square, "square transformer")}};
    Reply r = h.call("POST", need(sepal_length, "sepal length attribute"), &body);
    return {r.status == 302 && r.location == need(joined, "joined attribute"), status_is(r, 302).actual};
  });
  h.step("squared-prefix", "[26.01, 24.01, 22.09, ..., 38.44, 34.81]", [&]() -> Check {
    Value list = h.get_ok(append_query(need(joined, "joined attribute"), "instance=all")).at("valueList");
    bool ok = list.size() == 150 && near(list[0], Value(26.01), h.tol()) && near(list[1], Value(24.01), h.tol()) &&
              near(list[2], Value(22.09), h.tol()) && near(list[148], Value(38.44), h.tol()) &&
              near(list[149], Value(34.81), h.tol());
    return {ok, list.size() < 5 ? brief(list)
                                : brief(Value::array({list[0], list[1], list[2], list[list.size() - 2], list.back()}))};
  });

  // Learner.
  h.step("knn-learner", "kNN learner with the k/resources task schema", [&]() -> Check {
    knn = h.find_in(text_of(need(service, "service"), "learners"),
                    [](const Value& rep) { return text_of(rep, "description") == kKnnDescription; });
    Value rep = h.get_ok(need(knn, "knn learner"));
    return {json_equal(rep.at("taskSchema"), parse_json(kKnnTaskSchema)), brief(rep)};
  });

  // Task construction and training.
  std::vector<std::string> leaves;
  h.step("create-attribute", "201 with Location", [&]() -> Check {
    const Value& f = need(flower_rep, "default attribute");
    for (const char* part : {"sepal", "petal"}) {
      Value rep = h.get_ok(f["subattributes"][part].get<std::string>());
      leaves.push_back(rep.at("subattributes").at("length").get<std::string>());
      leaves.push_back(rep.at("subattributes").at("width").get<std::string>());
    }
    Value body = {{"psiType", "attribute-definition"},
                  {"description", "A feature vector representation of iris dimensions"},
                  {"attribute", leaves}};
    Reply r = h.call("POST", need(relation, "relation"), &body);
    if (r.status == 201 && !r.location.empty()) array1 = r.location;
    return status_is(r, 201);
  });
  h.step("array-attribute", "emits arrays of four numbers, leaf sub-attributes", [&]() -> Check {
    Value rep = h.get_ok(need(array1, "created attribute"));
    bool ok = h.same_schema(rep.at("emits"), parse_json(kFeatureVector)) &&
              json_equal(rep.at("subattributes"), Value(leaves)) && text_of(rep, "relation") == *relation;
    return {ok, brief(rep)};
  });
  h.step("array-attribute-conforms", "valid for $arrayAttribute of atomic values", [&]() -> Check {
    Value rep = h.get_ok(need(array1, "created attribute"));
    return h.conforms(rep, parse_json(R"({ "$arrayAttribute": { "allItems": "$atomicValueSchema" } })"));
  });
  h.step("train", "201 with Location", [&]() -> Check {
    task = Value{{"k", 3},
                 {"resources", {{"source", "$" + need(array1, "created attribute")},
                                {"target", "$" + need(species, "species attribute")}}}};
    Value body = {{"psiType", "task"}, {"task", *task}};
    Reply r = h.call("POST", need(knn, "knn learner"), &body);
    if (r.status == 201 && !r.location.empty()) predictor = r.location;
    return status_is(r, 201);
  });
  h.step("predictor", "trained transformer with provenance and update URI", [&]() -> Check {
    Value rep = h.get_ok(need(predictor, "predictor"));
    bool ok = text_of(rep, "psiType") == "transformer" &&
              text_of(rep, "description") == "kNN trained predictor (trained on iris)" &&
              h.same_schema(rep.at("accepts"), parse_json(kFeatureVector)) &&
              h.same_schema(rep.at("emits"), parse_json(kSpecies)) &&
              text_of(rep.at("provenance"), "learner") == *knn && json_equal(rep["provenance"].at("task"), *task) &&
              rep["provenance"].contains("created") && !text_of(rep, "update").empty();
    if (ok) predictor_rep = rep;
    return {ok, brief(rep)};
  });
  h.step("predict", "versicolor", [&]() -> Check {
    Value rep = h.get_ok(with_value(need(predictor, "predictor"), "[6.1,2.1,4.1,1.7]"));
    return {rep.at("value") == "versicolor", brief(rep)};
  });
  h.step("predict-invalid", "400 for a value outside the accepts schema", [&]() -> Check {
    Reply r = h.call("GET", with_value(need(predictor, "predictor"), "[6.1,2.1]"));
    return status_is(r, 400);
  });

  // Update.
  Value update_value = parse_json(R"({"target":"virginica","source":[6.4,3.1,6.5,2.1]})");
  h.step("update-schema", "{target: emits, source: accepts}", [&]() -> Check {
    Value rep = h.get_ok(text_of(need(predictor_rep, "predictor"), "update"));
    Value expected = {{"/target", parse_json(kSpecies)}, {"/source", parse_json(kFeatureVector)}};
    return {h.same_schema(rep, expected), brief(rep)};
  });
  h.step("update", "303 to the same predictor", [&]() -> Check {
    Value body = {{"psiType", "value"}, {"value", update_value}};
    Reply r = h.call("POST", text_of(need(predictor_rep, "predictor"), "update"), &body);
    return {r.status == 303 && r.location == *predictor, status_is(r, 303).actual};
  });
  h.step("updated-provenance", "provenance gains updated, the rest unchanged", [&]() -> Check {
    Value rep = h.get_ok(need(predictor, "predictor"));
    const Value& before = need(predictor_rep, "predictor");
    Value prov = rep.at("provenance");
    bool ok = prov.contains("updated") && !before["provenance"].contains("updated");
    prov.erase("updated");
    ok = ok && json_equal(prov, before["provenance"]) && json_equal(rep.at("accepts"), before["accepts"]) &&
         json_equal(rep.at("emits"), before["emits"]);
    return {ok, brief(rep.at("provenance"))};
  });
  h.step("train-k1", "201 for a task relying on the default k", [&]() -> Check {
    Value t = {{"resources", need(task, "task")["resources"]}};
    Value body = {{"psiType", "task"}, {"task", t}};
    Reply r = h.call("POST", need(knn, "knn learner"), &body);
    if (r.status == 201 && !r.location.empty()) predictor1 = r.location;
    return status_is(r, 201);
  });
  h.step("update-k1", "303, then virginica at the update point", [&]() -> Check {
    Value rep = h.get_ok(need(predictor1, "k=1 predictor"));
    Value body = {{"psiType", "value"}, {"value", update_value}};
    Reply r = h.call("POST", text_of(rep, "update"), &body);
    if (r.status != 303) return status_is(r, 303);
    Value answer = h.get_ok(with_value(*predictor1, serialize_json(update_value["source"])));
    return {answer.at("value") == "virginica", brief(answer)};
  });
  h.step("delete-predictor", "200, then 404", [&]() -> Check {
    Reply r = h.call("DELETE", need(predictor1, "k=1 predictor"));
    Reply after = h.call("GET", *predictor1);
    return {r.status == 200 && after.status == 404,
            std::to_string(r.status) + " then " + std::to_string(after.status)};
  });

  // Cross-service prediction.
  h.step("retailer-attribute", "feature-vector attribute at the retailer", [&]() -> Check {
    if (!retailer) throw Error(ErrorCode::kInternal, "skipped: no retailer service");
    Value svc = h.get_ok(options.retailer_origin);
    Value list = h.get_ok(text_of(svc, "relations"));
    Value rel = h.get_ok(list.at("resources").at(0).get<std::string>());
    Value rep = h.get_ok(text_of(rel, "defaultAttribute"));
    bool ok = h.same_schema(rep.at("emits"), parse_json(kFeatureVector)) && rep.at("subattributes").size() == 4;
    if (ok) retailer_attribute = text_of(rep, "uri");
    return {ok, brief(rep)};
  });
  h.step("retailer-join", "201 with Location", [&]() -> Check {
    Value body = {{"psiType", "composition"}, {"join", need(predictor, "predictor")}, {"description", "Predicted species"}};
    Reply r = h.call("POST", need(retailer_attribute, "retailer attribute"), &body);
    if (r.status == 201 && !r.location.empty()) predicted = r.location;
    return status_is(r, 201);
  });
  h.step("retailer-predicted", "attribute emitting the predictor's species", [&]() -> Check {
    Value rep = h.get_ok(need(predicted, "predictive attribute"));
    bool ok = text_of(rep, "psiType") == "attribute" && text_of(rep, "description") == "Predicted species" &&
              h.same_schema(rep.at("emits"), parse_json(kSpecies));
    return {ok, brief(rep)};
  });
  h.step("retailer-values", "[setosa, versicolor, virginica]", [&]() -> Check {
    Value rep = h.get_ok(append_query(need(predicted, "predictive attribute"), "instance=all"));
    return {json_equal(rep.at("valueList"), Value::array({"setosa", "versicolor", "virginica"})), brief(rep)};
  });

  // Rich values.
  h.step("image-attribute", "attribute emitting @image/jpeg", [&]() -> Check {
    for (const auto& uri : need(relation_rep, "relation").at("attributes")) {
      Value rep = h.get_ok(uri.get<std::string>());
      if (rep.at("emits") == "@image/jpeg") image = uri.get<std::string>();
    }
    return {image.has_value(), image.value_or("none")};
  });
  h.step("image-conforms", "valid for $richValueAttribute image/jpeg", [&]() -> Check {
    Value rep = h.get_ok(need(image, "image attribute"));
    return h.conforms(rep, parse_json(R"({ "$richValueAttribute": { "mediaType": "image/jpeg" } })"));
  });
  h.step("image-instance-1", "image/jpeg data URI", [&]() -> Check {
    Value rep = h.get_ok(append_query(need(image, "image attribute"), "instance=1"));
    const Value& v = rep.at("value");
    ValidationOutcome outcome = validate_rich(v, "image/jpeg", nullptr);
    bool ok = v.is_string() && v.get<std::string>().rfind("data:image/jpeg", 0) == 0 && outcome.valid();
    return {ok, ok ? "valid data URI" : brief(v) + " " + outcome.describe()};
  });
  h.step("imageclass-task", "image attribute fits the image learner's task schema", [&]() -> Check {
    auto learner = h.find_in(text_of(need(service, "service"), "learners"),
                             [](const Value& rep) { return text_of(rep, "description") == kImageLearnerDescription; });
    if (!learner) return {false, "no image learner"};
    Value rep = h.get_ok(*learner);
    if (!json_equal(rep.at("taskSchema"), parse_json(kImageTaskSchema))) return {false, brief(rep)};
    Value candidate = {{"resources", {{"source", h.compiled_rep(h.get_ok(need(image, "image attribute")))},
                                      {"target", h.compiled_rep(h.get_ok(*species))}}}};
    ValidationOptions vo;
    vo.check_rich = true;
    ValidationOutcome outcome = validate(candidate, h.compile_schema(rep["taskSchema"]), vo);
    return {outcome.valid(), outcome.valid() ? "valid task" : outcome.describe()};
  });

  // Every attribute of the relation, including ones created above.
  h.step("representations-conform", "every attribute valid for $attribute", [&]() -> Check {
    Value rep = h.get_ok(need(relation, "relation"));
    std::vector<std::string> pending;
    for (const auto& uri : rep.at("attributes")) pending.push_back(uri.get<std::string>());
    std::size_t checked = 0;
    std::set<std::string> seen;
    while (!pending.empty()) {
      std::string uri = pending.back();
      pending.pop_back();
      if (!seen.insert(uri).second) continue;
      Value a = h.get_ok(uri);
      Check c = h.conforms(a, Value("$attribute"));
      if (!c.pass) return {false, uri + ": " + c.actual};
      ++checked;
      if (a.contains("subattributes")) {
        for (const auto& sub : a["subattributes"]) pending.push_back(sub.get<std::string>());
      }
    }
    return {true, std::to_string(checked) + " attributes conform"};
  });

  return std::move(h.report);
}

}  // namespace psi
