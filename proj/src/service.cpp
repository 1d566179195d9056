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


#include "psi/service.hpp"

#include <spdlog/spdlog.h>

#include <ctime>
#include <filesystem>

#include "psi/error.hpp"
#include "psi/predefined.hpp"
#include "service_impl.hpp"

namespace psi {
namespace {

using SysClock = std::chrono::system_clock;

std::tm utc_tm(SysClock::time_point t) {
  std::time_t secs = SysClock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  return tm;
}

class RootResource : public Resource {
 public:
  using Resource::Resource;

  Reply get(Core& core, const Call& call) override {
    reject_query(call);
    Value body = {{"psiType", "service"}, {"uri", uri()}};
    const Namespaces& ns = core.options.namespaces;
    const std::pair<const char*, const std::string*> kinds[] = {{"relations", &ns.relations},
                                                                {"schema", &ns.schema},
                                                                {"learners", &ns.learners},
                                                                {"predictors", &ns.predictors},
                                                                {"transformers", &ns.transformers}};
    for (const auto& [name, path] : kinds) {
      if (core.serves(*path)) body[name] = core.collection(*path);
    }
    if (core.options.related_services.is_array() && !core.options.related_services.empty()) {
      body["relatedServices"] = core.options.related_services;
    }
    return {200, body, ""};
  }
};

class CollectionResource : public Resource {
 public:
  using Resource::Resource;

  Reply get(Core& core, const Call& call) override {
    reject_query(call);
    Value resources = Value::array();
    for (const auto& uri : core.members(this->uri())) resources.push_back(uri);
    return {200, {{"psiType", "resource-list"}, {"uri", uri()}, {"resources", resources}}, ""};
  }
};

class SchemaResource : public Resource {
 public:
  SchemaResource(std::string uri, const Value& tmpl) : Resource(std::move(uri)), template_(tmpl) {}

  Reply get(Core&, const Call& call) override {
    auto flag = query_value(call.query, "template");
    if (flag && *flag == "true") return {200, template_, ""};
    if (flag && *flag != "false") throw Error(ErrorCode::kBadRequest, "template must be true or false");
    return {200, instantiate_template(template_, arguments_from_query(call.query, {"template"})), ""};
  }

 private:
  const Value& template_;
};

Value square(const Value& v) {
  double x = v.get<double>();
  return x * x;
}

Value average(const Value& v) {
  double total = 0;
  for (const auto& x : v) total += x.get<double>();
  return total / static_cast<double>(v.size());
}

std::string strip_base(const std::string& base, const std::string& uri) {
  return uri.compare(0, base.size(), base) == 0 ? uri.substr(base.size()) : uri;
}

}  // namespace

std::string iso_minute(SysClock::time_point t) {
  std::tm tm = utc_tm(t);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%MZ", &tm);
  return buf;
}

std::string compact_millis(SysClock::time_point t) {
  std::tm tm = utc_tm(t);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d%H%M%S", &tm);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count() % 1000;
  char millis[8];
  std::snprintf(millis, sizeof millis, "%03d", static_cast<int>(ms));
  return std::string(buf) + millis;
}

Profile parse_profile(std::string_view name) {
  if (name == "full") return Profile::kFull;
  if (name == "data-only") return Profile::kDataOnly;
  if (name == "predictor-only") return Profile::kPredictorOnly;
  throw Error(ErrorCode::kBadRequest, "unknown profile \"" + std::string(name) + "\"");
}

std::string profile_name(Profile profile) {
  switch (profile) {
    case Profile::kFull: return "full";
    case Profile::kDataOnly: return "data-only";
    case Profile::kPredictorOnly: return "predictor-only";
  }
  return "full";
}

// ---- helpers ----

Reply Resource::post(Core&, const Call&) {
  throw Error(ErrorCode::kMethodNotAllowed, "POST is not supported by " + uri());
}

Reply Resource::del(Core&, const Call&) {
  throw Error(ErrorCode::kMethodNotAllowed, "DELETE is not supported by " + uri());
}

Value parse_body(const Call& call, const char* psi_type) {
  Value body;
  try {
    body = parse_json(call.body);
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadRequest, std::string("request body: ") + e.what());
  }
  if (!body.is_object()) throw Error(ErrorCode::kBadRequest, "request body must be an object");
  if (!body.contains("psiType") || body["psiType"] != psi_type) {
    throw Error(ErrorCode::kBadRequest, std::string("request psiType must be \"") + psi_type + "\"");
  }
  return body;
}

void reject_query(const Call& call) {
  if (!call.query.empty()) {
    throw Error(ErrorCode::kBadRequest, "unexpected query argument \"" + call.query.front().first + "\"");
  }
}

Value value_message(Value v) { return {{"psiType", "value"}, {"value", std::move(v)}}; }

Value parse_request_value(const std::string& text) {
  try {
    return parse_json(text);
  } catch (const Error&) {
    return text;
  }
}

std::string encode_chain(const std::vector<std::string>& chain) {
  Value list = Value::array();
  for (const auto& uri : chain) list.push_back(uri);
  return base64url_encode(serialize_json(list));
}

// ---- registry ----

Service::Impl::Impl(ServiceOptions opts) : options(std::move(opts)) {
  base = options.base_uri;
  while (!base.empty() && base.back() == '/') base.pop_back();
  if (!has_uri_scheme(base)) throw Error(ErrorCode::kBadRequest, "base URI needs a scheme: " + base);
  transport = options.transport ? options.transport
                                : std::make_shared<LocalTransport>(std::make_shared<HttpClientTransport>());
  resolver = options.media_resolver ? options.media_resolver
                                    : std::make_shared<TransportMediaTypeResolver>(transport);
  std::string schema_root = base + options.namespaces.schema;
  context = std::make_shared<ResolutionContext>(
      std::make_shared<PredefinedFetcher>(schema_root, std::make_shared<TransportSchemaFetcher>(transport)),
      schema_root);
  started = now();
}

SysClock::time_point Service::Impl::now() const {
  if (replay_time) return *replay_time;
  return options.clock ? options.clock() : SysClock::now();
}

bool Service::Impl::serves(const std::string& ns) const {
  switch (options.profile) {
    case Profile::kFull: return true;
    case Profile::kDataOnly: return ns == options.namespaces.relations || ns == options.namespaces.schema;
    case Profile::kPredictorOnly: return ns == options.namespaces.predictors || ns == options.namespaces.schema;
  }
  return false;
}

Value Service::Impl::compile(const Value& schema) const {
  CompileOptions opts;
  opts.add_schema_uri = false;
  return psi::compile(schema, *context, opts);
}

ValidationOptions Service::Impl::validation_options() const {
  ValidationOptions opts;
  opts.resolver = resolver;
  opts.check_rich = true;
  return opts;
}

std::shared_ptr<Resource> Service::Impl::find(const std::string& key) {
  std::shared_lock lock(mutex);
  auto it = registry.find(key);
  return it == registry.end() ? nullptr : it->second;
}

void Service::Impl::add(const std::vector<std::shared_ptr<Resource>>& resources, const std::string& coll) {
  std::unique_lock lock(mutex);
  for (const auto& r : resources) {
    if (registry.count(r->uri())) throw Error(ErrorCode::kInternal, "URI already in use: " + r->uri());
  }
  for (const auto& r : resources) registry[r->uri()] = r;
  if (!coll.empty() && !resources.empty()) collections[coll].push_back(resources.front()->uri());
}

void Service::Impl::remove(const std::vector<std::string>& keys) {
  std::unique_lock lock(mutex);
  for (const auto& key : keys) {
    registry.erase(key);
    for (auto& [name, list] : collections) std::erase(list, key);
  }
}

std::vector<std::string> Service::Impl::members(const std::string& coll) {
  std::shared_lock lock(mutex);
  auto it = collections.find(coll);
  return it == collections.end() ? std::vector<std::string>{} : it->second;
}

std::string Service::Impl::unique_uri(const std::string& candidate) {
  std::shared_lock lock(mutex);
  if (!registry.count(candidate)) return candidate;
  for (int n = 2;; ++n) {
    std::string next = candidate + "-" + std::to_string(n);
    if (!registry.count(next)) return next;
  }
}

Value Service::Impl::apply_remote(const std::string& transformer, const Value& input) {
  std::string uri = append_query(transformer, encode_query({{"value", serialize_json(input)}}));
  Value reply = get_json(*transport, uri);
  if (!reply.is_object() || !reply.contains("value")) {
    throw Error(ErrorCode::kResolutionIo, "transformer " + transformer + " returned no value");
  }
  return reply["value"];
}

HttpResponse Service::Impl::dispatch(const HttpRequest& request) {
  Reply reply;
  try {
    UriParts parts = split_uri(request.uri);
    std::string path = parts.path;
    while (path.size() > 1 && path.back() == '/') path.pop_back();
    Call call;
    call.method = request.method;
    call.body = request.body;
    call.key = parts.origin() + (path == "/" ? "" : path);
    std::optional<std::string> join;
    for (auto& [key, value] : decode_query(parts.query)) {
      if (key == "t") {
        if (join) throw Error(ErrorCode::kBadRequest, "repeated query argument \"t\"");
        join = value;
      } else {
        call.query.emplace_back(std::move(key), std::move(value));
      }
    }
    if (join) call.key += "?t=" + percent_encode(*join);

    auto resource = find(call.key);
    if (!resource) throw Error(ErrorCode::kNotFound, "no resource at " + call.key);
    if (request.method == "GET" || request.method == "HEAD") {
      reply = resource->get(*this, call);
    } else if (request.method == "POST") {
      reply = resource->post(*this, call);
    } else if (request.method == "DELETE") {
      reply = resource->del(*this, call);
    } else {
      throw Error(ErrorCode::kMethodNotAllowed, request.method + " is not supported");
    }
  } catch (const Error& e) {
    reply = Reply{http_status(e.code()), {{"psiType", "error"}, {"message", e.what()}}, ""};
    if (!e.detail().empty()) reply.body["detail"] = e.detail();
  } catch (const std::exception& e) {
    reply = Reply{500, {{"psiType", "error"}, {"message", e.what()}}, ""};
  }
  HttpResponse out;
  out.status = reply.status;
  out.location = reply.location;
  out.body = request.method == "HEAD" ? std::string() : serialize_json(reply.body);
  return out;
}

void Service::Impl::record(const HttpRequest& request, const HttpResponse& response) {
  if (request.method != "POST" && request.method != "DELETE") return;
  if (response.status < 200 || response.status >= 400) return;
  std::lock_guard lock(journal_mutex);
  if (!journaling) return;
  auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(now().time_since_epoch()).count();
  Value entry = {{"time", millis},
                 {"method", request.method},
                 {"uri", strip_base(base, request.uri)},
                 {"body", request.body},
                 {"status", response.status},
                 {"location", strip_base(base, response.location)}};
  journal << serialize_json(entry) << '\n';
  journal.flush();
}

// ---- Service ----

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  Core& core = *impl_;
  const Namespaces& ns = core.options.namespaces;
  core.add({std::make_shared<RootResource>(core.base)});

  auto add_collection = [&](const std::string& path) {
    if (core.serves(path)) core.add({std::make_shared<CollectionResource>(core.collection(path))});
    return core.serves(path);
  };
  if (add_collection(ns.schema)) {
    for (const auto& [name, tmpl] : predefined_templates()) {
      core.add({std::make_shared<SchemaResource>(core.collection(ns.schema) + "/" + name, tmpl)},
               core.collection(ns.schema));
    }
  }
  add_collection(ns.relations);
  add_collection(ns.predictors);
  if (add_collection(ns.transformers)) {
    Value provenance = {{"created", iso_minute(core.started)}, {"createdBy", "system"}};
    std::string coll = core.collection(ns.transformers);
    core.add({std::make_shared<FunctionTransformer>(core, coll + "/square", "Calculates the square of a number",
                                                    "$number", "$number", provenance, square)},
             coll);
    core.add({std::make_shared<FunctionTransformer>(
                 core, coll + "/average", "Calculates the arithmetic mean of a non-empty array of numbers",
                 parse_json(R"({"$array":{"allItems":"$number","minItems":1}})"), "$number", provenance, average)},
             coll);
  }
  if (add_collection(ns.learners)) {
    std::string coll = core.collection(ns.learners);
    Value stub_schema = knn_task_schema();
    stub_schema.erase("?k");
    core.add({std::make_shared<StubLearner>(core, coll + "/c45", "C4.5 decision tree learner over feature vectors",
                                            stub_schema)},
             coll);
    core.add({std::make_shared<StubLearner>(
                 core, coll + "/imageclass", "Supervised classifier of JPEG images using colour and shape information",
                 parse_json(R"({"/resources":{"/target":{"$nominalAttribute":{"allItems":"$string"}},)"
                            R"("/source":{"$richValueAttribute":{"mediaType":"image/jpeg"}}}})"))},
             coll);
    core.add({std::make_shared<KnnLearner>(core, coll + "/knn", "knn", std::nullopt)}, coll);
    core.add({std::make_shared<StubLearner>(core, coll + "/naivebayes", "Naive Bayes classifier over feature vectors",
                                            stub_schema)},
             coll);
    if (core.options.delayed_learner) {
      const auto& d = *core.options.delayed_learner;
      core.add({std::make_shared<KnnLearner>(core, coll + "/" + d.name, d.name, d.delay)}, coll);
    }
  }
  core.transport->mount(core.base, [this](const HttpRequest& request) { return handle(request); });
}

Service::~Service() { impl_->transport->unmount(impl_->base); }

HttpResponse Service::handle(const HttpRequest& request) {
  HttpResponse response = impl_->dispatch(request);
  impl_->record(request, response);
  return response;
}

const std::string& Service::base_uri() const { return impl_->base; }

std::string Service::collection_uri(std::string_view which) const {
  const Namespaces& ns = impl_->options.namespaces;
  if (which == "relations") return impl_->collection(ns.relations);
  if (which == "schema") return impl_->collection(ns.schema);
  if (which == "learners") return impl_->collection(ns.learners);
  if (which == "predictors") return impl_->collection(ns.predictors);
  if (which == "transformers") return impl_->collection(ns.transformers);
  throw Error(ErrorCode::kNotFound, "unknown collection " + std::string(which));
}

const ResolutionContext& Service::resolution_context() const { return *impl_->context; }

std::shared_ptr<LocalTransport> Service::transport() const { return impl_->transport; }

std::string Service::add_relation(const Manifest& manifest, Table table) {
  Core& core = *impl_;
  if (!core.serves(core.options.namespaces.relations)) {
    throw Error(ErrorCode::kBadRequest, "profile " + profile_name(core.options.profile) + " serves no relations");
  }
  std::string uri = core.collection(core.options.namespaces.relations) + "/" + manifest.name;
  auto relation = std::make_shared<RelationResource>(uri, manifest.name, manifest.description,
                                                     std::make_shared<const Table>(std::move(table)));
  std::vector<std::shared_ptr<Resource>> created{relation};

  std::function<std::shared_ptr<AttributeResource>(const Value&, const std::string&, const std::string&)> build =
      [&](const Value& tree, const std::string& at, const std::string& description) {
        std::shared_ptr<AttributeResource> attribute;
        if (tree.is_string()) {
          attribute = std::make_shared<ColumnAttribute>(at, relation, relation->table().index_of(tree.get<std::string>()),
                                                        description);
        } else {
          CompositeAttribute::Parts parts;
          std::size_t index = 0;
          for (const auto& [key, sub] : tree.items()) {
            std::string name = tree.is_array() ? std::to_string(++index) : key;
            parts.emplace_back(name, build(sub, at + "/" + name, ""));
          }
          attribute = std::make_shared<CompositeAttribute>(at, relation, tree.is_array(), std::move(parts),
                                                           description, false);
        }
        created.push_back(attribute);
        return attribute;
      };
  for (const auto& spec : manifest.attributes) {
    std::string at = uri + "/" + spec.name;
    build(spec.tree, at, spec.description);
    relation->add_attribute(at);
    if (spec.is_default) relation->set_default_attribute(at);
  }
  core.add(created, core.collection(core.options.namespaces.relations));
  return uri;
}

std::string Service::add_pretrained(const PretrainedSpec& spec, const Table& table) {
  Core& core = *impl_;
  if (!core.serves(core.options.namespaces.predictors)) {
    throw Error(ErrorCode::kBadRequest, "profile " + profile_name(core.options.profile) + " serves no predictors");
  }
  std::vector<std::size_t> source;
  Value items = Value::array();
  for (const auto& column : spec.source_columns) {
    source.push_back(table.index_of(column));
    items.push_back(table.emits[source.back()]);
  }
  std::size_t target = table.index_of(spec.target_column);
  std::vector<std::string> labels;
  for (const auto& row : table.rows) {
    if (!row[target].is_string()) throw Error(ErrorCode::kBadRequest, "target column must hold strings");
    labels.push_back(row[target].get<std::string>());
  }
  auto model = std::make_shared<KnnModel>(spec.k, labels);
  for (const auto& row : table.rows) {
    std::vector<Value> features;
    for (std::size_t c : source) features.push_back(row[c]);
    model->add(std::move(features), row[target].get<std::string>());
  }
  Value emits_enum = Value::array();
  for (const auto& label : model->labels()) emits_enum.push_back(label);

  std::string uri = core.collection(core.options.namespaces.predictors) + "/" + spec.name;
  auto predictor = std::make_shared<PredictorResource>(
      core, uri, spec.description.empty() ? "Pre-trained kNN predictor" : spec.description,
      Value{{"$array", {{"items", items}}}}, Value{{"$string", {{"enum", emits_enum}}}},
      Value{{"created", iso_minute(core.now())}, {"createdBy", "system"}}, "", std::move(model),
      std::chrono::system_clock::time_point::min());
  register_predictor(core, predictor);
  return uri;
}

void Service::open_journal() {
  Core& core = *impl_;
  if (core.options.journal.empty()) return;
  if (std::filesystem::exists(core.options.journal)) {
    std::ifstream in(core.options.journal);
    std::string line;
    std::size_t replayed = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        Value entry = parse_json(line);
        core.replay_time = SysClock::time_point(std::chrono::milliseconds(entry["time"].get<std::int64_t>()));
        HttpRequest request{entry["method"].get<std::string>(), core.base + entry["uri"].get<std::string>(),
                            entry["body"].get<std::string>()};
        HttpResponse response = core.dispatch(request);
        core.replay_time.reset();
        std::string expected = entry["location"].get<std::string>();
        if (response.status != entry["status"].get<int>() ||
            (!expected.empty() && strip_base(core.base, response.location) != expected)) {
          spdlog::warn("journal replay of {} {} diverged: status {}", request.method, request.uri, response.status);
        }
        ++replayed;
      } catch (const std::exception& e) {
        core.replay_time.reset();
        spdlog::warn("skipping journal entry: {}", e.what());
      }
    }
    spdlog::info("replayed {} journal entries from {}", replayed, core.options.journal.string());
  }
  std::lock_guard lock(core.journal_mutex);
  core.journal.open(core.options.journal, std::ios::app);
  if (!core.journal) throw Error(ErrorCode::kResolutionIo, "cannot open journal " + core.options.journal.string());
  core.journaling = true;
}

}  // namespace psi
