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


// Relations, attributes and attribute creation/join.

#include <algorithm>
#include <charconv>

#include "psi/compatibility.hpp"
#include "psi/error.hpp"
#include "psi/schema_lang.hpp"
#include "service_impl.hpp"

namespace psi {
namespace {

bool is_fold_key(const std::string& key) {
  return key == "fold" || key == "numfolds" || key == "numFolds" || key == "invert";
}

std::string with_fold(const std::string& uri, const std::optional<FoldQuery>& fold) {
  return fold ? append_query(uri, fold->to_query()) : uri;
}

// 1-based index from an `instance` argument.
std::size_t parse_instance(const std::string& text, std::size_t size) {
  std::size_t index = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw Error(ErrorCode::kBadRequest, "instance must be a positive integer or \"all\"");
  }
  if (index < 1 || index > size) {
    throw Error(ErrorCode::kBadRequest,
                "instance " + text + " is outside the range 1-" + std::to_string(size));
  }
  return index;
}

std::string optional_text(const Value& body, const char* key) {
  if (!body.contains(key)) return "";
  if (!body[key].is_string()) throw Error(ErrorCode::kBadRequest, std::string(key) + " must be a string");
  return body[key].get<std::string>();
}

}  // namespace

// ---- RelationResource ----

RelationResource::RelationResource(std::string uri, std::string name, std::string description,
                                   std::shared_ptr<const Table> table)
    : Resource(std::move(uri)), name_(std::move(name)), description_(std::move(description)), table_(std::move(table)) {}

void RelationResource::add_attribute(const std::string& uri) {
  std::lock_guard lock(mutex_);
  if (std::find(attributes_.begin(), attributes_.end(), uri) == attributes_.end()) attributes_.push_back(uri);
}

void RelationResource::remove_attribute(const std::string& uri) {
  std::lock_guard lock(mutex_);
  std::erase(attributes_, uri);
}

std::vector<std::size_t> RelationResource::rows(const std::optional<FoldQuery>& fold) const {
  std::vector<std::size_t> out;
  if (fold) {
    for (std::size_t index : select_fold(size(), *fold)) out.push_back(index - 1);
  } else {
    out.resize(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  }
  return out;
}

Value RelationResource::representation(const std::optional<FoldQuery>& fold) const {
  std::size_t selected = rows(fold).size();
  Value attributes = Value::array();
  {
    std::lock_guard lock(mutex_);
    for (const auto& uri : attributes_) attributes.push_back(with_fold(uri, fold));
  }
  Value body = {{"psiType", "relation"}, {"uri", with_fold(uri(), fold)}};
  if (!description_.empty()) body["description"] = description_ + (fold ? fold->describe() : "");
  body["size"] = selected;
  body["defaultAttribute"] = with_fold(default_attribute_, fold);
  body["attributes"] = attributes;
  body["querySchema"] = fold_query_schema();
  return body;
}

Reply RelationResource::get(Core&, const Call& call) {
  for (const auto& [key, value] : call.query) {
    if (!is_fold_key(key)) throw Error(ErrorCode::kBadRequest, "unexpected query argument \"" + key + "\"");
  }
  return {200, representation(parse_fold_query(call.query)), ""};
}

Reply RelationResource::post(Core& core, const Call& call) {
  reject_query(call);
  return core.create_attribute(*this, parse_body(call, "attribute-definition"));
}

// ---- AttributeResource ----

AttributeResource::AttributeResource(std::string uri, std::shared_ptr<RelationResource> relation, Value emits,
                                     std::string description, bool deletable)
    : Resource(std::move(uri)),
      relation_(std::move(relation)),
      emits_(std::move(emits)),
      description_(std::move(description)),
      deletable_(deletable) {}

Value AttributeResource::representation(const std::optional<FoldQuery>& fold) const {
  Value body = {{"psiType", "attribute"}, {"uri", with_fold(uri(), fold)}};
  if (!description_.empty()) body["description"] = description_;
  body["relation"] = with_fold(relation_->uri(), fold);
  body["emits"] = emits_;
  if (Value subs = subattributes(); !subs.is_null()) {
    if (fold) {
      for (auto& [key, sub] : subs.items()) sub = with_fold(sub.get<std::string>(), fold);
    }
    body["subattributes"] = subs;
  }
  body["querySchema"] = fold_query_schema();
  return body;
}

Reply AttributeResource::get(Core& core, const Call& call) {
  std::optional<std::string> instance;
  for (const auto& [key, value] : call.query) {
    if (key == "instance") {
      if (instance) throw Error(ErrorCode::kBadRequest, "repeated query argument \"instance\"");
      instance = value;
    } else if (!is_fold_key(key)) {
      throw Error(ErrorCode::kBadRequest, "unexpected query argument \"" + key + "\"");
    }
  }
  std::optional<FoldQuery> fold = parse_fold_query(call.query);
  if (!instance) return {200, representation(fold), ""};

  std::vector<std::size_t> rows = relation_->rows(fold);
  if (*instance == "all") {
    Value list = Value::array();
    for (auto& v : extract(core, rows)) list.push_back(std::move(v));
    return {200, {{"psiType", "value"}, {"valueList", list}}, ""};
  }
  std::size_t index = parse_instance(*instance, rows.size());
  return {200, value_message(extract(core, {rows[index - 1]}).front()), ""};
}

Reply AttributeResource::post(Core& core, const Call& call) {
  reject_query(call);
  return core.join_attribute(*this, parse_body(call, "composition"));
}

Reply AttributeResource::del(Core& core, const Call& call) {
  reject_query(call);
  if (!deletable_) {
    throw Error(ErrorCode::kForbidden, "attribute " + uri() + " is defined by the service and cannot be deleted");
  }
  std::vector<std::string> keys = owned;
  keys.push_back(uri());
  core.remove(keys);
  relation_->remove_attribute(uri());
  return {200, {{"uri", uri()}, {"status", "deleted"}}, ""};
}

// ---- attribute kinds ----

ColumnAttribute::ColumnAttribute(std::string uri, std::shared_ptr<RelationResource> relation, std::size_t column,
                                 std::string description)
    : AttributeResource(std::move(uri), relation, relation->table().emits.at(column), std::move(description), false),
      column_(column) {}

std::vector<Value> ColumnAttribute::extract(Core&, const std::vector<std::size_t>& rows) const {
  std::vector<Value> out;
  out.reserve(rows.size());
  const Table& table = relation()->table();
  for (std::size_t r : rows) out.push_back(table.rows.at(r).at(column_));
  return out;
}

CompositeAttribute::CompositeAttribute(std::string uri, std::shared_ptr<RelationResource> relation, bool is_array,
                                       Parts parts, std::string description, bool deletable)
    : AttributeResource(std::move(uri), std::move(relation), compose_emits(is_array, parts), std::move(description),
                        deletable),
      is_array_(is_array),
      parts_(std::move(parts)) {}

Value CompositeAttribute::compose_emits(bool is_array, const Parts& parts) {
  if (is_array) {
    Value items = Value::array();
    for (const auto& [name, part] : parts) items.push_back(part->emits());
    return {{"$array", {{"items", items}}}};
  }
  std::vector<std::string> keys;
  std::vector<Value> schemas;
  for (const auto& [name, part] : parts) {
    keys.push_back(name);
    schemas.push_back(part->emits());
  }
  try {
    return compose_object(keys, schemas);
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadRequest, e.what());
  }
}

std::vector<Value> CompositeAttribute::extract(Core& core, const std::vector<std::size_t>& rows) const {
  std::vector<std::vector<Value>> columns;
  columns.reserve(parts_.size());
  for (const auto& [name, part] : parts_) columns.push_back(part->extract(core, rows));
  std::vector<Value> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Value v = is_array_ ? Value::array() : Value::object();
    for (std::size_t p = 0; p < parts_.size(); ++p) {
      if (is_array_) {
        v.push_back(std::move(columns[p][r]));
      } else {
        v[parts_[p].first] = std::move(columns[p][r]);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

Value CompositeAttribute::subattributes() const {
  Value subs = is_array_ ? Value::array() : Value::object();
  for (const auto& [name, part] : parts_) {
    if (is_array_) {
      subs.push_back(part->uri());
    } else {
      subs[name] = part->uri();
    }
  }
  return subs;
}

JoinedAttribute::JoinedAttribute(std::string uri, std::shared_ptr<AttributeResource> base,
                                 std::vector<std::string> chain, Value emits, std::string description)
    : AttributeResource(std::move(uri), base->relation(), std::move(emits), std::move(description), true),
      base_(std::move(base)),
      chain_(std::move(chain)) {}

std::vector<Value> JoinedAttribute::extract(Core& core, const std::vector<std::size_t>& rows) const {
  std::vector<Value> values = base_->extract(core, rows);
  for (const auto& transformer : chain_) {
    for (auto& v : values) v = core.apply_remote(transformer, v);
  }
  return values;
}

// ---- operations ----

Reply Service::Impl::create_attribute(RelationResource& relation, const Value& body) {
  if (!body.contains("attribute")) throw Error(ErrorCode::kBadRequest, "create request lacks \"attribute\"");
  const Value& definition = body["attribute"];
  if (!definition.is_array() && !definition.is_object()) {
    throw Error(ErrorCode::kBadRequest, "attribute definition must be an array or an object");
  }
  std::string description = optional_text(body, "description");
  std::string identity = relation.uri() + " " + serialize_json(definition);

  std::string existing;
  {
    std::shared_lock lock(mutex);
    auto it = definitions.find(identity);
    if (it != definitions.end()) existing = it->second;
  }
  if (auto previous = existing.empty() ? nullptr : find_as<AttributeResource>(existing)) {
    return {201, previous->representation(std::nullopt), existing};
  }
  std::string uri;
  {
    std::unique_lock lock(mutex);
    uri = relation.uri() + "/derived/" + std::to_string(++derived_counter);
  }
  uri = unique_uri(uri);

  auto self = find_as<RelationResource>(relation.uri());
  std::vector<std::shared_ptr<Resource>> created;
  std::function<std::shared_ptr<AttributeResource>(const Value&, const std::string&, bool)> build =
      [&](const Value& def, const std::string& at, bool top) -> std::shared_ptr<AttributeResource> {
    if (def.is_string()) {
      auto leaf = find_as<AttributeResource>(def.get<std::string>());
      if (!leaf || leaf->relation() != self) {
        throw Error(ErrorCode::kBadRequest,
                    def.get<std::string>() + " is not an attribute of relation " + relation.uri());
      }
      return leaf;
    }
    if (!def.is_array() && !def.is_object()) {
      throw Error(ErrorCode::kBadRequest, "attribute definitions hold only arrays, objects and attribute URIs");
    }
    CompositeAttribute::Parts parts;
    std::size_t index = 0;
    for (const auto& [key, sub] : def.items()) {
      std::string name = def.is_array() ? std::to_string(++index) : key;
      parts.emplace_back(name, build(sub, at + "/" + name, false));
    }
    auto composite = std::make_shared<CompositeAttribute>(at, self, def.is_array(), std::move(parts),
                                                          top ? description : "", top);
    created.push_back(composite);
    return composite;
  };
  auto attribute = build(definition, uri, true);
  // `created` lists nested parts before the top-level attribute.
  std::rotate(created.rbegin(), created.rbegin() + 1, created.rend());
  for (std::size_t i = 1; i < created.size(); ++i) attribute->owned.push_back(created[i]->uri());
  add(created);
  relation.add_attribute(uri);
  {
    std::unique_lock lock(mutex);
    definitions[identity] = uri;
  }
  return {201, attribute->representation(std::nullopt), uri};
}

Reply Service::Impl::join_attribute(AttributeResource& attribute, const Value& body) {
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
  Compatibility compat = check_compatibility(compile(attribute.emits()), compile(rep["accepts"]));
  if (!compat) {
    throw Error(ErrorCode::kBadRequest, "attribute " + attribute.uri() + " is not compatible with " + target,
                compat.reason);
  }
  std::vector<std::string> chain = attribute.join_chain();
  chain.push_back(target);
  auto root = find_as<AttributeResource>(attribute.root_uri());
  if (!root) throw Error(ErrorCode::kNotFound, "attribute " + attribute.root_uri() + " no longer exists");
  std::string uri = root->uri() + "?t=" + encode_chain(chain);
  if (find(uri)) return {302, find_as<AttributeResource>(uri)->representation(std::nullopt), uri};

  auto joined = std::make_shared<JoinedAttribute>(uri, root, chain, rep["emits"], description);
  try {
    add({joined});
  } catch (const Error&) {
    if (find(uri)) return {302, find_as<AttributeResource>(uri)->representation(std::nullopt), uri};
    throw;
  }
  root->relation()->add_attribute(uri);
  return {201, joined->representation(std::nullopt), uri};
}

}  // namespace psi
