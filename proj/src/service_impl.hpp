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


// Internal to the service implementation: the registry and resource kinds.

#ifndef PSI_SRC_SERVICE_IMPL_HPP
#define PSI_SRC_SERVICE_IMPL_HPP

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "psi/folds.hpp"
#include "psi/knn.hpp"
#include "psi/service.hpp"
#include "psi/uri.hpp"

namespace psi {

struct Call {
  std::string method;
  std::string key;   // registry key: origin + path, plus "?t=..." for joins
  QueryPairs query;  // decoded, without "t"
  std::string body;
};

struct Reply {
  int status = 200;
  Value body;
  std::string location;
};

using Core = Service::Impl;

class Resource {
 public:
  explicit Resource(std::string uri) : uri_(std::move(uri)) {}
  virtual ~Resource() = default;

  const std::string& uri() const { return uri_; }

  virtual Reply get(Core& core, const Call& call) = 0;
  virtual Reply post(Core& core, const Call& call);
  virtual Reply del(Core& core, const Call& call);

 private:
  std::string uri_;
};

// Request helpers shared by the resource kinds.
Value parse_body(const Call& call, const char* psi_type);
void reject_query(const Call& call);
Value value_message(Value v);
Value parse_request_value(const std::string& text);

class TransformerResource;
class AttributeResource;
class RelationResource;
class PredictorResource;

struct Service::Impl {
  explicit Impl(ServiceOptions opts);

  ServiceOptions options;
  std::string base;  // base URI without trailing slash
  std::shared_ptr<LocalTransport> transport;
  std::shared_ptr<MediaTypeResolver> resolver;
  std::shared_ptr<ResolutionContext> context;

  std::shared_mutex mutex;
  std::map<std::string, std::shared_ptr<Resource>> registry;
  std::map<std::string, std::vector<std::string>> collections;
  std::map<std::string, std::string> definitions;  // attribute definition -> URI
  std::size_t derived_counter = 0;

  std::mutex journal_mutex;
  std::ofstream journal;
  bool journaling = false;
  std::optional<std::chrono::system_clock::time_point> replay_time;
  std::chrono::system_clock::time_point started;

  std::chrono::system_clock::time_point now() const;
  std::string collection(const std::string& ns) const { return base + ns; }
  bool serves(const std::string& ns) const;

  Value compile(const Value& schema) const;
  ValidationOptions validation_options() const;

  std::shared_ptr<Resource> find(const std::string& key);
  template <class T>
  std::shared_ptr<T> find_as(const std::string& key) {
    return std::dynamic_pointer_cast<T>(find(key));
  }
  /// Registers resources together under one lock; throws Error(kInternal)
  /// when a URI is taken.
  void add(const std::vector<std::shared_ptr<Resource>>& resources, const std::string& collection = "");
  void remove(const std::vector<std::string>& keys);
  std::vector<std::string> members(const std::string& collection);
  /// `candidate`, or `candidate-2`, `candidate-3`, ... when taken.
  std::string unique_uri(const std::string& candidate);

  HttpResponse dispatch(const HttpRequest& request);
  void record(const HttpRequest& request, const HttpResponse& response);

  // Operations spanning several resources.
  Reply create_attribute(RelationResource& relation, const Value& body);
  Reply join_attribute(AttributeResource& attribute, const Value& body);
  Reply join_transformer(TransformerResource& transformer, const Value& body);
  /// GET `transformer?value=...` through the transport.
  Value apply_remote(const std::string& transformer, const Value& input);
};

// ---- relations and attributes ----

class RelationResource : public Resource {
 public:
  RelationResource(std::string uri, std::string name, std::string description, std::shared_ptr<const Table> table);

  const std::string& name() const { return name_; }
  const Table& table() const { return *table_; }
  std::size_t size() const { return table_->rows.size(); }

  void set_default_attribute(std::string uri) { default_attribute_ = std::move(uri); }
  void add_attribute(const std::string& uri);
  void remove_attribute(const std::string& uri);

  /// 0-based table rows selected by the fold query.
  std::vector<std::size_t> rows(const std::optional<FoldQuery>& fold) const;
  Value representation(const std::optional<FoldQuery>& fold) const;

  Reply get(Core& core, const Call& call) override;
  Reply post(Core& core, const Call& call) override;

 private:
  std::string name_;
  std::string description_;
  std::shared_ptr<const Table> table_;
  std::string default_attribute_;
  mutable std::mutex mutex_;
  std::vector<std::string> attributes_;
};

class AttributeResource : public Resource {
 public:
  AttributeResource(std::string uri, std::shared_ptr<RelationResource> relation, Value emits,
                    std::string description, bool deletable);

  const std::shared_ptr<RelationResource>& relation() const { return relation_; }
  const Value& emits() const { return emits_; }
  bool deletable() const { return deletable_; }

  /// Values for the given 0-based table rows.
  virtual std::vector<Value> extract(Core& core, const std::vector<std::size_t>& rows) const = 0;
  virtual Value subattributes() const { return Value(); }
  /// Transformer URIs applied after the base attribute, in order.
  virtual std::vector<std::string> join_chain() const { return {}; }
  /// The attribute the join chain starts from.
  virtual std::string root_uri() const { return uri(); }

  /// Resources removed together with this one.
  std::vector<std::string> owned;

  Value representation(const std::optional<FoldQuery>& fold) const;

  Reply get(Core& core, const Call& call) override;
  Reply post(Core& core, const Call& call) override;
  Reply del(Core& core, const Call& call) override;

 private:
  std::shared_ptr<RelationResource> relation_;
  Value emits_;
  std::string description_;
  bool deletable_;
};

class ColumnAttribute : public AttributeResource {
 public:
  ColumnAttribute(std::string uri, std::shared_ptr<RelationResource> relation, std::size_t column,
                  std::string description);
  std::vector<Value> extract(Core& core, const std::vector<std::size_t>& rows) const override;

 private:
  std::size_t column_;
};

/// Array or object composition of other attributes.
class CompositeAttribute : public AttributeResource {
 public:
  using Parts = std::vector<std::pair<std::string, std::shared_ptr<AttributeResource>>>;

  CompositeAttribute(std::string uri, std::shared_ptr<RelationResource> relation, bool is_array, Parts parts,
                     std::string description, bool deletable);

  std::vector<Value> extract(Core& core, const std::vector<std::size_t>& rows) const override;
  Value subattributes() const override;

  /// Schema composition of the parts' emits ($array sugar for arrays).
  static Value compose_emits(bool is_array, const Parts& parts);

 private:
  bool is_array_;
  Parts parts_;
};

/// An attribute followed by a chain of transformers.
class JoinedAttribute : public AttributeResource {
 public:
  JoinedAttribute(std::string uri, std::shared_ptr<AttributeResource> base, std::vector<std::string> chain,
                  Value emits, std::string description);

  std::vector<Value> extract(Core& core, const std::vector<std::size_t>& rows) const override;
  std::vector<std::string> join_chain() const override { return chain_; }
  std::string root_uri() const override { return base_->uri(); }

 private:
  std::shared_ptr<AttributeResource> base_;
  std::vector<std::string> chain_;
};

// ---- transformers, learners, predictors ----

class TransformerResource : public Resource {
 public:
  TransformerResource(Core& core, std::string uri, std::string description, Value accepts, Value emits,
                      Value provenance);

  const Value& accepts() const { return accepts_; }
  const Value& emits() const { return emits_; }
  const Value& compiled_accepts() const { return compiled_accepts_; }

  /// Applies the function to an input already valid for `accepts`.
  virtual Value apply(Core& core, const Value& input) = 0;
  virtual Value representation() const;
  virtual std::vector<std::string> join_chain() const { return {}; }
  virtual std::string root_uri() const { return uri(); }

  Reply get(Core& core, const Call& call) override;
  Reply post(Core& core, const Call& call) override;

 protected:
  std::string description_;
  Value accepts_;
  Value emits_;
  Value compiled_accepts_;
  Value provenance_;
};

class FunctionTransformer : public TransformerResource {
 public:
  using Fn = std::function<Value(const Value&)>;
  FunctionTransformer(Core& core, std::string uri, std::string description, Value accepts, Value emits,
                      Value provenance, Fn fn);
  Value apply(Core& /*core*/, const Value& input) override { return fn_(input); }

 private:
  Fn fn_;
};

class JoinedTransformer : public TransformerResource {
 public:
  JoinedTransformer(Core& core, std::string uri, std::shared_ptr<TransformerResource> base,
                    std::vector<std::string> chain, Value emits, std::string description);
  Value apply(Core& core, const Value& input) override;
  std::vector<std::string> join_chain() const override { return chain_; }
  std::string root_uri() const override { return base_->uri(); }

 private:
  std::shared_ptr<TransformerResource> base_;
  std::vector<std::string> chain_;
};

class PredictorResource : public TransformerResource {
 public:
  PredictorResource(Core& core, std::string uri, std::string description, Value accepts, Value emits,
                    Value provenance, std::string learner, std::shared_ptr<const KnnModel> model,
                    std::chrono::system_clock::time_point ready_at);

  const std::string& update_uri() const { return update_uri_; }
  bool training(const Core& core) const;
  std::shared_ptr<const KnnModel> model() const;
  Value update_schema() const;

  Value apply(Core& core, const Value& input) override;
  Value representation() const override;

  Reply get(Core& core, const Call& call) override;
  Reply post(Core& core, const Call& call) override;
  Reply del(Core& core, const Call& call) override;

  Reply update(Core& core, const Value& body);

 private:
  void refuse_while_training(const Core& core) const;

  std::string learner_;
  std::string update_uri_;
  std::chrono::system_clock::time_point ready_at_;
  mutable std::mutex mutex_;
  std::shared_ptr<const KnnModel> model_;
};

class UpdateResource : public Resource {
 public:
  UpdateResource(std::string uri, std::weak_ptr<PredictorResource> predictor);
  Reply get(Core& core, const Call& call) override;
  Reply post(Core& core, const Call& call) override;

 private:
  std::shared_ptr<PredictorResource> predictor() const;
  std::weak_ptr<PredictorResource> predictor_;
};

class LearnerResource : public Resource {
 public:
  LearnerResource(Core& core, std::string uri, std::string description, Value task_schema);

  Reply get(Core& core, const Call& call) override;
  Reply post(Core& core, const Call& call) override;

 protected:
  /// `submitted` is the task as posted, `task` has defaults applied and
  /// `resources` maps resource names to dereferenced representations.
  virtual Reply train(Core& core, const Value& submitted, const Value& task, const Value& resources) = 0;

  std::string description_;
  Value task_schema_;
  Value compiled_task_schema_;
};

/// kNN learner. With a delay it answers 202 and the predictor reports
/// training status until the delay has passed.
class KnnLearner : public LearnerResource {
 public:
  KnnLearner(Core& core, std::string uri, std::string name, std::optional<std::chrono::milliseconds> delay);

 protected:
  Reply train(Core& core, const Value& submitted, const Value& task, const Value& resources) override;

 private:
  std::string name_;
  std::optional<std::chrono::milliseconds> delay_;
};

/// Listed learner whose training is not provided; process answers 501.
class StubLearner : public LearnerResource {
 public:
  StubLearner(Core& core, std::string uri, std::string description, Value task_schema);
  Reply post(Core& core, const Call& call) override;

 protected:
  Reply train(Core& core, const Value& submitted, const Value& task, const Value& resources) override;
};

/// Builds the standard kNN task schema.
Value knn_task_schema();

/// Registers predictor and its update endpoint.
void register_predictor(Core& core, const std::shared_ptr<PredictorResource>& predictor);

/// Joins a URI list into a `t` query value.
std::string encode_chain(const std::vector<std::string>& chain);

}  // namespace psi

#endif  // PSI_SRC_SERVICE_IMPL_HPP
