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


// Transformers, learners and predictors.

#include "psi/compatibility.hpp"
#include "psi/error.hpp"
#include "psi/schema_lang.hpp"
#include "service_impl.hpp"

namespace psi {
namespace {

std::string optional_text(const Value& body, const char* key) {
  if (!body.contains(key)) return "";
  if (!body[key].is_string()) throw Error(ErrorCode::kBadRequest, std::string(key) + " must be a string");
  return body[key].get<std::string>();
}

// Last path segment of a URI, ignoring any query.
std::string last_segment(const std::string& uri) {
  std::string path = split_uri(uri).path;
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

void expect_valid(const Value& v, const Value& compiled, const Core& core, const std::string& what) {
  ValidationOutcome outcome = validate(v, compiled, core.validation_options());
  if (!outcome.valid()) throw Error(ErrorCode::kBadRequest, what, outcome.describe());
}

// Compiles the schema-valued fields of a dereferenced representation.
Value with_compiled_schemas(const Core& core, const Value& rep, const std::string& name) {
  if (!rep.is_object()) return rep;
  Value out = rep;
  for (const char* field : {"emits", "accepts", "querySchema", "taskSchema"}) {
    if (!out.contains(field)) continue;
    try {
      out[field] = core.compile(out[field]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kBadRequest, "resource \"" + name + "\": cannot compile its " + field, e.what());
    }
  }
  return out;
}

Value dereference(Core& core, const Value& v, const std::string& name) {
  if (!v.is_string() || !is_reference_string(v.get<std::string>())) return v;
  std::string uri = v.get<std::string>().substr(1);
  try {
    return get_json(*core.transport, uri);
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadRequest, "cannot dereference resource \"" + name + "\" at " + uri, e.what());
  }
}

}  // namespace

// ---- TransformerResource ----

TransformerResource::TransformerResource(Core& core, std::string uri, std::string description, Value accepts,
                                         Value emits, Value provenance)
    : Resource(std::move(uri)),
      description_(std::move(description)),
      accepts_(std::move(accepts)),
      emits_(std::move(emits)),
      compiled_accepts_(core.compile(accepts_)),
      provenance_(std::move(provenance)) {}

Value TransformerResource::representation() const {
  Value body = {{"psiType", "transformer"}, {"uri", uri()}};
  if (!description_.empty()) body["description"] = description_;
  body["accepts"] = accepts_;
  body["emits"] = emits_;
  if (provenance_.is_object() && !provenance_.empty()) body["provenance"] = provenance_;
  return body;
}

Reply TransformerResource::get(Core& core, const Call& call) {
  std::optional<std::string> text;
  for (const auto& [key, value] : call.query) {
    if (key != "value" || text) throw Error(ErrorCode::kBadRequest, "unexpected query argument \"" + key + "\"");
    text = value;
  }
  if (!text) return {200, representation(), ""};
  Value input = parse_request_value(*text);
  expect_valid(input, compiled_accepts_, core, "value is not valid for the accepts schema of " + uri());
  return {200, value_message(apply(core, input)), ""};
}

Reply TransformerResource::post(Core& core, const Call& call) {
  reject_query(call);
  return core.join_transformer(*this, parse_body(call, "composition"));
}

FunctionTransformer::FunctionTransformer(Core& core, std::string uri, std::string description, Value accepts,
                                         Value emits, Value provenance, Fn fn)
    : TransformerResource(core, std::move(uri), std::move(description), std::move(accepts), std::move(emits),
                          std::move(provenance)),
      fn_(std::move(fn)) {}

JoinedTransformer::JoinedTransformer(Core& core, std::string uri, std::shared_ptr<TransformerResource> base,
                                     std::vector<std::string> chain, Value emits, std::string description)
    : TransformerResource(core, std::move(uri), std::move(description), base->accepts(), std::move(emits),
                          Value{{"created", iso_minute(core.now())}, {"joins", base->uri()}}),
      base_(std::move(base)),
      chain_(std::move(chain)) {}

Value JoinedTransformer::apply(Core& core, const Value& input) {
  Value v = core.apply_remote(base_->uri(), input);
  for (const auto& transformer : chain_) v = core.apply_remote(transformer, v);
  return v;
}

Reply Service::Impl::join_transformer(TransformerResource& transformer, const Value& body) {
  if (!body.contains("join") || !body["join"].is_string()) {
    throw Error(ErrorCode::kBadRequest, "join request lacks a \"join\" URI");
  }
  std::string target = body["join"].get<std::string>();
  if (!is_valid_uri(target) || !has_uri_scheme(target)) throw Error(ErrorCode::kBadRequest, "join is not a URI");
  std::string description = optional_text(body, "description");

  Value rep;
  try {
    rep = get_json(*transport, target);
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadRequest, std::string("cannot dereference ") + target, e.what());
  }
  if (!rep.is_object() || rep.value("psiType", "") != "transformer" || !rep.contains("accepts") ||
      !rep.contains("emits")) {
    throw Error(ErrorCode::kBadRequest, target + " is not a transformer");
  }
  Compatibility compat = check_compatibility(compile(transformer.emits()), compile(rep["accepts"]));
  if (!compat) {
    throw Error(ErrorCode::kBadRequest, "transformer " + transformer.uri() + " is not compatible with " + target,
                compat.reason);
  }
  std::vector<std::string> chain = transformer.join_chain();
  chain.push_back(target);
  auto root = find_as<TransformerResource>(transformer.root_uri());
  if (!root) throw Error(ErrorCode::kNotFound, "transformer " + transformer.root_uri() + " no longer exists");
  std::string uri = root->uri() + "?t=" + encode_chain(chain);
  if (auto existing = find_as<TransformerResource>(uri)) return {302, existing->representation(), uri};

  auto joined = std::make_shared<JoinedTransformer>(*this, uri, root, chain, rep["emits"], description);
  try {
    add({joined});
  } catch (const Error&) {
    if (auto existing = find_as<TransformerResource>(uri)) return {302, existing->representation(), uri};
    throw;
  }
  return {201, joined->representation(), uri};
}

// ---- PredictorResource ----

PredictorResource::PredictorResource(Core& core, std::string uri, std::string description, Value accepts,
                                     Value emits, Value provenance, std::string learner,
                                     std::shared_ptr<const KnnModel> model,
                                     std::chrono::system_clock::time_point ready_at)
    : TransformerResource(core, uri, std::move(description), std::move(accepts), std::move(emits),
                          std::move(provenance)),
      learner_(std::move(learner)),
      update_uri_(uri + "/update"),
      ready_at_(ready_at),
      model_(std::move(model)) {}

bool PredictorResource::training(const Core& core) const { return core.now() < ready_at_; }

void PredictorResource::refuse_while_training(const Core& core) const {
  if (training(core)) throw Error(ErrorCode::kForbidden, "predictor " + uri() + " is still training");
}

std::shared_ptr<const KnnModel> PredictorResource::model() const {
  std::lock_guard lock(mutex_);
  return model_;
}

Value PredictorResource::update_schema() const { return {{"/target", emits_}, {"/source", accepts_}}; }

Value PredictorResource::apply(Core&, const Value& input) { return model()->predict(features_of(input)); }

Value PredictorResource::representation() const {
  Value body = TransformerResource::representation();
  {
    std::lock_guard lock(mutex_);
    if (provenance_.is_object() && !provenance_.empty()) body["provenance"] = provenance_;
  }
  body["update"] = update_uri_;
  return body;
}

Reply PredictorResource::get(Core& core, const Call& call) {
  if (training(core)) {
    if (!call.query.empty()) refuse_while_training(core);
    return {200,
            {{"psiType", "training-status"}, {"uri", uri()}, {"learner", learner_}, {"status", "training"}},
            ""};
  }
  return TransformerResource::get(core, call);
}

Reply PredictorResource::post(Core& core, const Call& call) {
  refuse_while_training(core);
  return TransformerResource::post(core, call);
}

Reply PredictorResource::del(Core& core, const Call& call) {
  reject_query(call);
  refuse_while_training(core);
  core.remove({uri(), update_uri_});
  return {200, {{"uri", uri()}, {"status", "deleted"}}, ""};
}

Reply PredictorResource::update(Core& core, const Value& body) {
  refuse_while_training(core);
  if (body.contains("value") == body.contains("valueList")) {
    throw Error(ErrorCode::kBadRequest, "an update holds exactly one of \"value\" and \"valueList\"");
  }
  Value items = Value::array();
  if (body.contains("value")) {
    items.push_back(body["value"]);
  } else if (body["valueList"].is_array()) {
    items = body["valueList"];
  } else {
    throw Error(ErrorCode::kBadRequest, "valueList must be an array");
  }
  Value compiled = core.compile(update_schema());
  for (std::size_t i = 0; i < items.size(); ++i) {
    expect_valid(items[i], compiled, core, "update value " + std::to_string(i + 1) + " is not valid for the update schema");
  }

  std::lock_guard lock(mutex_);
  auto next = std::make_shared<KnnModel>(*model_);
  for (const auto& item : items) next->add(features_of(item["source"]), item["target"].get<std::string>());

  auto stamp = core.now();
  if (core.options.immutable_predictors) {
    Value provenance = provenance_;
    provenance["updated"] = iso_minute(stamp);
    provenance["updatedFrom"] = uri();
    std::string fresh = core.unique_uri(uri() + "_" + compact_millis(stamp));
    auto successor = std::make_shared<PredictorResource>(core, fresh, description_, accepts_, emits_, provenance,
                                                         learner_, std::move(next),
                                                         std::chrono::system_clock::time_point::min());
    register_predictor(core, successor);
    return {201, successor->representation(), fresh};
  }
  model_ = std::move(next);
  provenance_["updated"] = iso_minute(stamp);
  Value rep = TransformerResource::representation();
  rep["provenance"] = provenance_;
  rep["update"] = update_uri_;
  return {303, rep, uri()};
}

UpdateResource::UpdateResource(std::string uri, std::weak_ptr<PredictorResource> predictor)
    : Resource(std::move(uri)), predictor_(std::move(predictor)) {}

std::shared_ptr<PredictorResource> UpdateResource::predictor() const {
  auto p = predictor_.lock();
  if (!p) throw Error(ErrorCode::kNotFound, "predictor for " + uri() + " no longer exists");
  return p;
}

Reply UpdateResource::get(Core& core, const Call& call) {
  reject_query(call);
  auto p = predictor();
  if (p->training(core)) throw Error(ErrorCode::kForbidden, "predictor " + p->uri() + " is still training");
  return {200, p->update_schema(), ""};
}

Reply UpdateResource::post(Core& core, const Call& call) {
  reject_query(call);
  return predictor()->update(core, parse_body(call, "value"));
}

void register_predictor(Core& core, const std::shared_ptr<PredictorResource>& predictor) {
  core.add({predictor, std::make_shared<UpdateResource>(predictor->update_uri(), predictor)},
           core.collection(core.options.namespaces.predictors));
}

// ---- learners ----

Value knn_task_schema() {
  return parse_json(R"json({
    "?k": { "$integer": { "default": 1, "min": 1,
      "description": "The number of nearest neighbours to examine" } },
    "/resources": {
      "/target": { "$nominalAttribute": { "allItems": "$string" } },
      "/source": { "$arrayAttribute": { "allItems": "$atomicValueSchema" } }
    }
  })json");
}

LearnerResource::LearnerResource(Core& core, std::string uri, std::string description, Value task_schema)
    : Resource(std::move(uri)),
      description_(std::move(description)),
      task_schema_(std::move(task_schema)),
      compiled_task_schema_(core.compile(task_schema_)) {}

Reply LearnerResource::get(Core&, const Call& call) {
  reject_query(call);
  return {200,
          {{"psiType", "learner"}, {"uri", uri()}, {"description", description_}, {"taskSchema", task_schema_}},
          ""};
}

Reply LearnerResource::post(Core& core, const Call& call) {
  reject_query(call);
  Value body = parse_body(call, "task");
  if (!body.contains("task") || !body["task"].is_object()) {
    throw Error(ErrorCode::kBadRequest, "process request lacks a \"task\" object");
  }
  const Value& submitted = body["task"];
  Value check = submitted;
  Value resources = Value::object();
  if (submitted.contains("resources")) {
    if (!submitted["resources"].is_object()) throw Error(ErrorCode::kBadRequest, "task resources must be an object");
    for (const auto& [name, v] : submitted["resources"].items()) {
      resources[name] = dereference(core, v, name);
      check["resources"][name] = with_compiled_schemas(core, resources[name], name);
    }
  }
  expect_valid(check, compiled_task_schema_, core, "task is not valid for the taskSchema of " + uri());

  Value task = submitted;
  if (compiled_task_schema_.contains("properties")) {
    for (const auto& [name, schema] : compiled_task_schema_["properties"].items()) {
      if (!task.contains(name) && schema.is_object() && schema.contains("default")) task[name] = schema["default"];
    }
  }
  return train(core, submitted, task, resources);
}

KnnLearner::KnnLearner(Core& core, std::string uri, std::string name, std::optional<std::chrono::milliseconds> delay)
    : LearnerResource(core, std::move(uri),
                      delay ? "A k-nearest neighbour learner that reports training status for a fixed delay"
                            : "A k-nearest neighbour algorithm that takes feature vectors as input",
                      [&] {
                        Value schema = knn_task_schema();
                        if (delay) {
                          schema["?delay"] = parse_json(
                              R"({"$integer":{"min":0,"description":"Milliseconds until training completes"}})");
                        }
                        return schema;
                      }()),
      name_(std::move(name)),
      delay_(delay) {}

Reply KnnLearner::train(Core& core, const Value& submitted, const Value& task, const Value& resources) {
  const Value& source = resources["source"];
  const Value& target = resources["target"];
  if (source.value("relation", "") != target.value("relation", "")) {
    throw Error(ErrorCode::kBadRequest, "source and target attributes belong to different relations");
  }
  std::string source_uri = source.value("uri", "");
  std::string target_uri = target.value("uri", "");
  Value features;
  Value labels;
  try {
    features = get_json(*core.transport, append_query(source_uri, "instance=all")).at("valueList");
    labels = get_json(*core.transport, append_query(target_uri, "instance=all")).at("valueList");
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadRequest, "cannot fetch training values", e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kBadRequest, "cannot fetch training values", e.what());
  }
  if (features.size() != labels.size()) {
    throw Error(ErrorCode::kInternal, "source and target returned different numbers of values");
  }
  if (features.empty()) throw Error(ErrorCode::kBadRequest, "cannot train on a relation without instances");

  std::vector<std::string> label_set;
  for (const auto& label : labels) {
    if (!label.is_string()) throw Error(ErrorCode::kBadRequest, "target values must be strings");
    label_set.push_back(label.get<std::string>());
  }
  auto model = std::make_shared<KnnModel>(task["k"].get<std::size_t>(), label_set);
  for (std::size_t i = 0; i < features.size(); ++i) {
    model->add(features_of(features[i]), labels[i].get<std::string>());
  }
  Value emits_enum = Value::array();
  for (const auto& label : model->labels()) emits_enum.push_back(label);

  auto stamp = core.now();
  std::string relation_name = last_segment(source.value("relation", ""));
  std::string uri = core.unique_uri(core.collection(core.options.namespaces.predictors) + "/" + name_ + "_" +
                                    relation_name + "_" + compact_millis(stamp));
  auto delay = delay_.value_or(std::chrono::milliseconds(0));
  if (delay_ && task.contains("delay")) delay = std::chrono::milliseconds(task["delay"].get<std::int64_t>());

  auto predictor = std::make_shared<PredictorResource>(
      core, uri, "kNN trained predictor (trained on " + relation_name + ")", source["emits"],
      Value{{"$string", {{"enum", emits_enum}}}},
      Value{{"learner", this->uri()}, {"task", submitted}, {"created", iso_minute(stamp)}}, this->uri(),
      std::move(model), delay_ ? stamp + delay : std::chrono::system_clock::time_point::min());
  register_predictor(core, predictor);
  if (delay_) {
    return {202, {{"psiType", "training-status"}, {"uri", uri}, {"learner", this->uri()}, {"status", "training"}}, uri};
  }
  return {201, predictor->representation(), uri};
}

StubLearner::StubLearner(Core& core, std::string uri, std::string description, Value task_schema)
    : LearnerResource(core, std::move(uri), std::move(description), std::move(task_schema)) {}

Reply StubLearner::post(Core&, const Call&) {
  throw Error(ErrorCode::kNotImplemented, "learner " + uri() + " is listed but does not train predictors");
}

Reply StubLearner::train(Core&, const Value&, const Value&, const Value&) {
  throw Error(ErrorCode::kNotImplemented, "learner " + uri() + " is listed but does not train predictors");
}

}  // namespace psi
