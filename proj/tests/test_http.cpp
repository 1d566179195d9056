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

#include <cstdlib>
#include <fstream>

#include "fixture.hpp"
#include "psi/config.hpp"
#include "psi/conformance.hpp"
#include "psi/error.hpp"
#include "psi/uri.hpp"

namespace psi {
namespace {

ServiceConfig local_config(const char* file) {
  ServiceConfig config = load_config(testing_support::data_path(std::string("config/") + file));
  config.address = "127.0.0.1:0";
  config.journal.clear();
  return config;
}

TEST(Config, ShippedConfigs) {
  ServiceConfig full = load_config(testing_support::data_path("config/full.json"));
  EXPECT_EQ(full.profile, Profile::kFull);
  ASSERT_EQ(full.manifests.size(), 1u);
  EXPECT_TRUE(std::filesystem::exists(full.manifests[0]));
  ASSERT_TRUE(full.delayed_learner);
  EXPECT_EQ(full.delayed_learner->delay, std::chrono::milliseconds(200));

  ServiceConfig pred = load_config(testing_support::data_path("config/predictor-only.json"));
  EXPECT_EQ(pred.profile, Profile::kPredictorOnly);
  ASSERT_EQ(pred.pretrained.size(), 1u);
  EXPECT_EQ(pred.pretrained[0].k, 3u);
}

TEST(Config, Parsing) {
  ServiceConfig c = parse_config(parse_json(R"({"address":"0.0.0.0:9000","profile":"data-only",
    "manifests":["m.json"],"related_services":[{"rel":"peer","href":"http://peer.example"}]})"),
                                 "/etc/psi");
  EXPECT_EQ(c.address, "0.0.0.0:9000");
  EXPECT_EQ(c.manifests[0], std::filesystem::path("/etc/psi/m.json"));
  EXPECT_EQ(c.related_services.size(), 1u);
  EXPECT_THROW(parse_config(parse_json(R"({"profile":"everything"})"), "."), Error);
  EXPECT_THROW(parse_config(parse_json(R"({"address":7})"), "."), Error);
  EXPECT_EQ(split_address("127.0.0.1:80"), (std::pair<std::string, int>{"127.0.0.1", 80}));
  EXPECT_THROW(split_address("localhost"), Error);
  EXPECT_THROW(split_address("h:99999"), Error);
}

TEST(Http, ServesOverRealSockets) {
  Deployment d(local_config("full.json"));
  d.start();
  ASSERT_GT(d.port(), 0);
  EXPECT_EQ(d.base_uri(), "http://127.0.0.1:" + std::to_string(d.port()));
  auto http = std::make_shared<HttpClientTransport>(std::chrono::seconds(5));
  HttpResponse root = http->send({"GET", d.base_uri(), ""});
  EXPECT_EQ(root.status, 200);
  EXPECT_EQ(root.content_type.rfind("application/json", 0), 0u);
  EXPECT_EQ(parse_json(root.body)["psiType"], "service");

  HttpResponse join = http->send({"POST", d.base_uri() + "/data/iris/flower/sepal/length",
                                  R"({"psiType":"composition","join":")" + d.base_uri() + R"(/transform/square"})"});
  EXPECT_EQ(join.status, 201);
  EXPECT_FALSE(join.location.empty());
  HttpResponse again = http->send({"POST", d.base_uri() + "/data/iris/flower/sepal/length",
                                   R"({"psiType":"composition","join":")" + d.base_uri() + R"(/transform/square"})"});
  EXPECT_EQ(again.status, 302);
  EXPECT_EQ(again.location, join.location);
  HttpResponse value = http->send({"GET", join.location + "&instance=1", ""});
  EXPECT_NEAR(parse_json(value.body)["value"].get<double>(), 26.01, 1e-9);
  EXPECT_EQ(http->send({"GET", d.base_uri() + "/nowhere", ""}).status, 404);
  d.stop();
  EXPECT_THROW(http->send({"GET", d.base_uri(), ""}), Error);
}

TEST(Http, ConformanceOverHttp) {
  Deployment d(local_config("full.json"));
  d.start();
  ConformanceReport report = run_conformance(d.base_uri());
  EXPECT_TRUE(report.ok()) << report.to_text();
  EXPECT_GE(report.steps.size(), 40u);
  EXPECT_NE(report.to_text().find("failed"), std::string::npos);
}

TEST(Http, ConformanceReportsFailures) {
  ConformanceReport report = run_conformance("http://127.0.0.1:1");
  EXPECT_FALSE(report.ok());
  ASSERT_NE(report.find("discover"), nullptr);
  EXPECT_FALSE(report.find("discover")->pass);
  EXPECT_NE(report.to_text().find("FAIL discover"), std::string::npos);
}

TEST(Http, ProfilesBoot) {
  Deployment data(local_config("data-only.json"));
  data.start();
  Deployment pred(local_config("predictor-only.json"));
  pred.start();
  auto http = std::make_shared<HttpClientTransport>(std::chrono::seconds(5));
  Value droot = parse_json(http->send({"GET", data.base_uri(), ""}).body);
  EXPECT_TRUE(droot.contains("relations"));
  EXPECT_FALSE(droot.contains("predictors"));
  Value proot = parse_json(http->send({"GET", pred.base_uri(), ""}).body);
  EXPECT_FALSE(proot.contains("relations"));
  Value list = get_json(*http, proot["predictors"].get<std::string>());
  ASSERT_EQ(list["resources"].size(), 1u);
  std::string predictor = list["resources"][0].get<std::string>();
  Value answer = get_json(*http, append_query(predictor, encode_query({{"value", "[6.1,2.1,4.1,1.7]"}})));
  EXPECT_EQ(answer["value"], "versicolor");
}

}  // namespace
}  // namespace psi
