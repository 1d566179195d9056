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


#ifndef PSI_KNN_HPP
#define PSI_KNN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "psi/value.hpp"

namespace psi {

struct KnnPoint {
  std::vector<Value> features;
  std::string label;
};

/// Squared Euclidean distance. A pair of non-numeric features adds 0 when
/// equal and 1 otherwise. Vectors must have equal length.
double knn_distance(const std::vector<Value>& a, const std::vector<Value>& b);

/// Memorising k-nearest-neighbour classifier.
///
/// Neighbour ties: every point at the k-th smallest distance joins the vote.
/// Vote ties: each tied label is represented by its nearest voter (distance,
/// then stored index); the label whose representative has the lowest stored
/// index wins.
class KnnModel {
 public:
  /// `labels` is the frozen label set; it is sorted and deduplicated.
  KnnModel(std::size_t k, std::vector<std::string> labels);

  /// Throws Error(kBadRequest) on arity mismatch, unknown label or a
  /// non-atomic feature.
  void add(std::vector<Value> features, std::string label);

  /// Throws Error(kBadRequest) on an empty model or arity mismatch.
  std::string predict(const std::vector<Value>& x) const;

  std::size_t k() const { return k_; }
  std::size_t size() const { return points_.size(); }
  std::size_t arity() const { return arity_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<KnnPoint>& points() const { return points_; }

 private:
  std::size_t k_;
  std::size_t arity_ = 0;
  std::vector<std::string> labels_;
  std::vector<KnnPoint> points_;
};

/// Converts a JSON array of atoms into a feature vector; throws
/// Error(kBadRequest) otherwise.
std::vector<Value> features_of(const Value& v);

}  // namespace psi

#endif  // PSI_KNN_HPP
