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

#include <algorithm>

#include "fixture.hpp"
#include "oracles.hpp"
#include "psi/error.hpp"
#include "psi/knn.hpp"
#include "psi/manifest.hpp"

namespace psi {
namespace {

struct IrisData {
  std::vector<oracle::LabeledPoint> points;
  KnnModel model(std::size_t k) const {
    KnnModel m(k, {"setosa", "versicolor", "virginica"});
    for (const auto& p : points) m.add({Value(p.x[0]), Value(p.x[1]), Value(p.x[2]), Value(p.x[3])}, p.label);
    return m;
  }
};

const IrisData& iris() {
  static const IrisData data = [] {
    IrisData d;
    Table t = ingest(load_manifest(testing_support::data_path("iris/iris.json")));
    for (const auto& row : t.rows) {
      d.points.push_back({{row[0].get<double>(), row[1].get<double>(), row[2].get<double>(), row[3].get<double>()},
                          row[4].get<std::string>()});
    }
    return d;
  }();
  return data;
}

std::vector<Value> as_values(const std::vector<double>& x) { return {x.begin(), x.end()}; }

TEST(Knn, WalkthroughProbe) {
  EXPECT_EQ(iris().model(3).predict(as_values({6.1, 2.1, 4.1, 1.7})), "versicolor");
}

TEST(Knn, AgreesWithBruteForce) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (std::size_t k : {1u, 3u, 5u}) {
    KnnModel m = iris().model(k);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> q = {u(rng), u(rng) / 2, u(rng), u(rng) / 3};
      EXPECT_EQ(m.predict(as_values(q)), oracle::brute_knn(iris().points, q, k)) << k;
    }
    // Training points themselves, where distance ties are common.
    for (std::size_t i = 0; i < iris().points.size(); i += 7) {
      const auto& q = iris().points[i].x;
      EXPECT_EQ(m.predict(as_values(q)), oracle::brute_knn(iris().points, q, k));
    }
  }
}

TEST(Knn, KEqualToSizeIsMajority) {
  KnnModel m(5, {"a", "b"});
  m.add(as_values({0}), "a");
  m.add(as_values({1}), "b");
  m.add(as_values({2}), "b");
  m.add(as_values({3}), "a");
  m.add(as_values({4}), "b");
  EXPECT_EQ(m.predict(as_values({0})), "b");
  EXPECT_EQ(m.predict(as_values({100})), "b");
}

TEST(Knn, VoteTieGoesToEarliestNearest) {
  KnnModel m(2, {"a", "b"});
  m.add(as_values({1}), "b");
  m.add(as_values({-1}), "a");
  EXPECT_EQ(m.predict(as_values({0})), "b");
  KnnModel n(2, {"a", "b"});
  n.add(as_values({-1}), "a");
  n.add(as_values({1}), "b");
  EXPECT_EQ(n.predict(as_values({0})), "a");
}

TEST(Knn, UpdateChangesNearestNeighbour) {
  KnnModel m = iris().model(1);
  std::vector<double> p = {6.1, 2.1, 4.1, 1.7};
  EXPECT_EQ(m.predict(as_values(p)), "versicolor");
  m.add(as_values(p), "virginica");
  EXPECT_EQ(m.predict(as_values(p)), "virginica");
  EXPECT_EQ(m.size(), 151u);
}

TEST(Knn, PermutationInvariantWithoutTies) {
  auto points = iris().points;
  std::mt19937 rng(3);
  std::shuffle(points.begin(), points.end(), rng);
  KnnModel a = iris().model(1);
  KnnModel b(1, {"virginica", "setosa", "versicolor", "setosa"});
  for (const auto& p : points) b.add(as_values(p.x), p.label);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> q = {u(rng), u(rng) / 2, u(rng), u(rng) / 3};
    EXPECT_EQ(a.predict(as_values(q)), b.predict(as_values(q)));
  }
  EXPECT_EQ(b.labels(), (std::vector<std::string>{"setosa", "versicolor", "virginica"}));
}

TEST(Knn, NominalFeaturesUseOverlapDistance) {
  EXPECT_DOUBLE_EQ(knn_distance({Value("a"), Value(1.0)}, {Value("b"), Value(3.0)}), 5.0);
  EXPECT_DOUBLE_EQ(knn_distance({Value("a"), Value(true)}, {Value("a"), Value(true)}), 0.0);
}

TEST(Knn, Errors) {
  EXPECT_THROW(KnnModel(0, {"a"}), Error);
  KnnModel m(1, {"a"});
  EXPECT_THROW(m.predict(as_values({1})), Error);
  m.add(as_values({1, 2}), "a");
  EXPECT_THROW(m.add(as_values({1}), "a"), Error);
  EXPECT_THROW(m.add(as_values({1, 2}), "z"), Error);
  EXPECT_THROW(m.add({Value::array(), Value(1)}, "a"), Error);
  EXPECT_THROW(m.predict(as_values({1})), Error);
  EXPECT_THROW(features_of(Value(3)), Error);
  EXPECT_THROW(features_of(parse_json("[1,[2]]")), Error);
  EXPECT_EQ(features_of(parse_json("[1,\"x\"]")).size(), 2u);
}

}  // namespace
}  // namespace psi
