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


#include "psi/knn.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "psi/error.hpp"

namespace psi {

double knn_distance(const std::vector<Value>& a, const std::vector<Value>& b) {
  double total = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i].is_number() && b[i].is_number()) {
      double d = a[i].get<double>() - b[i].get<double>();
      total += d * d;
    } else if (!json_equal(a[i], b[i])) {
      total += 1;
    }
  }
  return total;
}

std::vector<Value> features_of(const Value& v) {
  if (!v.is_array()) throw Error(ErrorCode::kBadRequest, "feature vector must be an array");
  std::vector<Value> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!is_atomic(x)) throw Error(ErrorCode::kBadRequest, "features must be atomic values");
    out.push_back(x);
  }
  return out;
}

KnnModel::KnnModel(std::size_t k, std::vector<std::string> labels) : k_(k), labels_(std::move(labels)) {
  if (k_ == 0) throw Error(ErrorCode::kBadRequest, "k must be at least 1");
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

void KnnModel::add(std::vector<Value> features, std::string label) {
  for (const auto& x : features) {
    if (!is_atomic(x)) throw Error(ErrorCode::kBadRequest, "features must be atomic values");
  }
  if (points_.empty() && arity_ == 0) {
    arity_ = features.size();
  } else if (features.size() != arity_) {
    throw Error(ErrorCode::kBadRequest, "expected " + std::to_string(arity_) + " features, got " +
                                            std::to_string(features.size()));
  }
  if (!std::binary_search(labels_.begin(), labels_.end(), label)) {
    throw Error(ErrorCode::kBadRequest, "label \"" + label + "\" is not one of the trained labels");
  }
  points_.push_back({std::move(features), std::move(label)});
}

std::string KnnModel::predict(const std::vector<Value>& x) const {
  if (points_.empty()) throw Error(ErrorCode::kBadRequest, "model has no training points");
  if (x.size() != arity_) {
    throw Error(ErrorCode::kBadRequest, "expected " + std::to_string(arity_) + " features, got " +
                                            std::to_string(x.size()));
  }
  std::vector<double> dist(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) dist[i] = knn_distance(points_[i].features, x);

  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  double cutoff = dist[order[std::min(k_, order.size()) - 1]];

  struct Tally {
    std::size_t votes = 0;
    std::size_t representative = 0;  // first voter in (distance, index) order
  };
  std::map<std::string, Tally> tally;
  for (std::size_t i : order) {
    if (dist[i] > cutoff) break;
    auto [it, fresh] = tally.try_emplace(points_[i].label);
    if (fresh) it->second.representative = i;
    ++it->second.votes;
  }
  const std::string* best = nullptr;
  const Tally* best_tally = nullptr;
  for (const auto& [label, t] : tally) {
    if (best == nullptr || t.votes > best_tally->votes ||
        (t.votes == best_tally->votes && t.representative < best_tally->representative)) {
      best = &label;
      best_tally = &t;
    }
  }
  return *best;
}

}  // namespace psi
