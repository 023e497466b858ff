//
// Copyright 2026 The pview Authors
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
//

#include <filesystem>
#include <memory>
#include <random>
#include <thread>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"
#include "oracles.h"
#include "pview/bisection.h"
#include "pview/error_bounds.h"
#include "pview/query.h"
#include "pview/range_expr.h"
#include "pview/serialization.h"
#include "pview/service.h"

namespace pview {
namespace {

using ::nlohmann::json;
using ::testing::HasSubstr;

Schema MixedSchema() {
  return Schema({AttributeSpec::Numeric("age", {0, 10, 20, 30, 40, 50}),
                 AttributeSpec::Categorical("color", {"red", "green", "blue"}),
                 AttributeSpec::EqualWidth("score", 8, 0, 1)});
}

PView BuiltView(uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Coord, int64_t>> cells;
  for (int i = 0; i < 60; ++i) {
    cells.push_back({{static_cast<uint32_t>(rng() % 5),
                      static_cast<uint32_t>(rng() % 3),
                      static_cast<uint32_t>(rng() % 8)},
                     static_cast<int64_t>(1 + rng() % 30)});
  }
  auto tensor = CountTensor::FromCells(MixedSchema(), cells);
  return BuildView(*tensor, Hyperparams{}, {.seed = seed})->view;
}

std::shared_ptr<const PView> Shared(PView view) {
  return std::make_shared<const PView>(std::move(view));
}

TEST(RangeExpressionTest, RawValuesFollowTheBinning) {
  const Schema schema = MixedSchema();
  auto q = ParseRangeExpression(schema, "age=20:30");
  ASSERT_TRUE(q.ok()) << q.status();
  EXPECT_EQ(q->ranges[0], (IndexRange{2, 2}));
  EXPECT_EQ(q->ranges[1], (IndexRange{0, 2}));
  EXPECT_EQ(ParseRangeExpression(schema, "age=20:35")->ranges[0],
            (IndexRange{2, 3}));
  EXPECT_EQ(ParseRangeExpression(schema, "age=25")->ranges[0],
            (IndexRange{2, 2}));
  EXPECT_EQ(ParseRangeExpression(schema, "age=0:50")->ranges[0],
            (IndexRange{0, 4}));
  EXPECT_EQ(ParseRangeExpression(schema, "age=40:50")->ranges[0],
            (IndexRange{4, 4}));
  EXPECT_EQ(ParseRangeExpression(schema, "color=green:blue")->ranges[1],
            (IndexRange{1, 2}));
  EXPECT_EQ(ParseRangeExpression(schema, " score@3:5 , color=red ")->ranges,
            (Ranges{{0, 4}, {0, 0}, {3, 5}}));
}

TEST(RangeExpressionTest, EmptyIsFullDomain) {
  const Schema schema = MixedSchema();
  EXPECT_EQ(*ParseRangeExpression(schema, ""), RangeQuery::FullDomain(schema));
  EXPECT_EQ(*ParseRangeExpression(schema, "  "), RangeQuery::FullDomain(schema));
}

TEST(RangeExpressionTest, Errors) {
  const Schema schema = MixedSchema();
  auto code = [&](std::string_view e) {
    return ParseRangeExpression(schema, e).status().code();
  };
  EXPECT_EQ(code("height=1:2"), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(ParseRangeExpression(schema, "height=1:2").status().message(),
              HasSubstr("height"));
  EXPECT_EQ(code("age"), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(code("age=1:2:3"), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(code("age=a:b"), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(code("age@1.5:2"), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(code("age=1:2,age=3:4"), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(code("age=:4"), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(code("age=30:20"), absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(code("age@3:1"), absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(code("color=blue:red"), absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(code("age=10:70"), absl::StatusCode::kOutOfRange);
  EXPECT_EQ(code("age@0:5"), absl::StatusCode::kOutOfRange);
  EXPECT_EQ(code("color=purple"), absl::StatusCode::kOutOfRange);
}

TEST(RangeExpressionTest, FormatRoundTrips) {
  const Schema schema = MixedSchema();
  RangeQuery q{{{1, 3}, {2, 2}, {0, 7}}};
  EXPECT_EQ(*ParseRangeExpression(schema, FormatRangeExpression(schema, q)), q);
}

TEST(ServiceTest, NoViewIs503) {
  ViewService service(nullptr);
  EXPECT_EQ(service.GetSchema().status, 503);
  EXPECT_EQ(service.PostQuery("{}").status, 503);
  EXPECT_EQ(service.GetBlocks("age", "color").status, 503);
}

TEST(ServiceTest, SchemaListsAttributesAndNoCounts) {
  PView view = BuiltView();
  ViewService service(Shared(view));
  HttpReply reply = service.GetSchema();
  ASSERT_EQ(reply.status, 200);
  json body = json::parse(reply.body);
  ASSERT_EQ(body["schema"]["attributes"].size(), 3u);
  EXPECT_EQ(body["schema"]["attributes"][1]["name"], "color");
  EXPECT_EQ(body["blocks"], view.blocks.size());
  EXPECT_EQ(body["domain_sizes"], json({5, 3, 8}));
  EXPECT_FALSE(body.contains("cells"));
  EXPECT_FALSE(body.dump().find("noisy_sum") != std::string::npos);
}

TEST(ServiceTest, FullDomainQueryIsTheNoisyTotal) {
  PView view = BuiltView();
  ViewService service(Shared(view));
  HttpReply reply = service.PostQuery("{}");
  ASSERT_EQ(reply.status, 200) << reply.body;
  json body = json::parse(reply.body);
  EXPECT_NEAR(body["answer"].get<double>(), view.TotalNoisyCount(), 1e-9);
  EXPECT_EQ(body["blocks_touched"], view.blocks.size());
  EXPECT_EQ(body["mu"], 0.05);
  EXPECT_GE(body["theta_min"].get<double>(), 0.0);
  EXPECT_LE(body["theta_min"].get<double>(), body["theta_max"].get<double>());
}

TEST(ServiceTest, QueryMatchesLibraryAndIsPure) {
  PView view = BuiltView();
  ViewService service(Shared(view));
  const std::string request = R"({"ranges": {
      "age": {"lo": 10, "hi": 40, "raw": true},
      "color": {"lo": "green", "hi": "blue", "raw": true},
      "score": {"lo": 2, "hi": 6}}, "mu": 0.2})";
  HttpReply first = service.PostQuery(request);
  HttpReply second = service.PostQuery(request);
  ASSERT_EQ(first.status, 200) << first.body;
  json a = json::parse(first.body);
  json b = json::parse(second.body);
  a.erase("elapsed_ms");
  b.erase("elapsed_ms");
  EXPECT_EQ(a.dump(), b.dump());

  RangeQuery q{{{1, 3}, {1, 2}, {2, 6}}};
  EXPECT_EQ(a["answer"].get<double>(), *Answer(view, q));
  auto bound = ErrorBounds(view, q, 0.2);
  EXPECT_EQ(a["theta_max"].get<double>(), bound->theta_max);
  EXPECT_EQ(a["blocks_touched"], BlocksTouched(view, q));
  EXPECT_EQ(a["ranges"]["age"], json({1, 3}));

  json by_expression = json::parse(
      service.PostQuery(R"({"expression": "age@1:3,color@1:2,score@2:6",
                            "mu": 0.2})").body);
  EXPECT_EQ(by_expression["answer"], a["answer"]);
}

TEST(ServiceTest, MalformedRequestsAre400WithFields) {
  ViewService service(Shared(BuiltView()));
  auto field = [&](std::string_view body) {
    HttpReply r = service.PostQuery(body);
    EXPECT_EQ(r.status, 400) << body;
    return json::parse(r.body)["field"];
  };
  EXPECT_EQ(field("{not json"), nullptr);
  EXPECT_EQ(field("[1, 2]"), nullptr);
  EXPECT_EQ(field(R"({"mu": 1.5})"), "mu");
  EXPECT_EQ(field(R"({"mu": "high"})"), "mu");
  EXPECT_EQ(field(R"({"extra": 1})"), "extra");
  EXPECT_EQ(field(R"({"ranges": []})"), "ranges");
  EXPECT_EQ(field(R"({"ranges": {"height": {"lo": 0, "hi": 1}}})"),
            "ranges.height");
  EXPECT_EQ(field(R"({"ranges": {"age": {"lo": 0}}})"), "ranges.age.hi");
  EXPECT_EQ(field(R"({"ranges": {"age": {"lo": [0], "hi": 1}}})"),
            "ranges.age.lo");
  EXPECT_EQ(field(R"({"ranges": {"age": {"lo": 0, "hi": 9}}})"), "ranges.age");
  EXPECT_EQ(field(R"({"ranges": {"age": {"lo": 0, "hi": 1, "raw": "yes"}}})"),
            "ranges.age.raw");
  EXPECT_EQ(field(R"({"expression": "bogus=1"})"), "expression");
}

TEST(ServiceTest, ReversedRangeIs422) {
  ViewService service(Shared(BuiltView()));
  HttpReply r = service.PostQuery(R"({"ranges": {"age": {"lo": 3, "hi": 1}}})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(json::parse(r.body)["field"], "ranges.age");
  EXPECT_EQ(service.PostQuery(R"({"expression": "age=40:10"})").status, 422);
}

TEST(ServiceTest, BlocksProjection) {
  PView view = BuiltView();
  ViewService service(Shared(view));
  HttpReply reply = service.GetBlocks("age", "score");
  ASSERT_EQ(reply.status, 200) << reply.body;
  json body = json::parse(reply.body);
  const auto& rects = body["rects"];
  EXPECT_LE(rects.size(), view.blocks.size());
  // Per-cell projected densities add back up to the noisy total.
  double total = 0.0;
  int blocks = 0;
  for (const auto& r : rects) {
    const double w = r["x"][1].get<double>() - r["x"][0].get<double>() + 1;
    const double h = r["y"][1].get<double>() - r["y"][0].get<double>() + 1;
    total += r["density"].get<double>() * w * h;
    blocks += r["blocks"].get<int>();
  }
  EXPECT_NEAR(total, view.TotalNoisyCount(), 1e-6);
  EXPECT_EQ(blocks, static_cast<int>(view.blocks.size()));

  EXPECT_EQ(service.GetBlocks("age", std::nullopt).status, 400);
  EXPECT_EQ(service.GetBlocks("height", "age").status, 400);
  EXPECT_EQ(service.GetBlocks("age", "age").status, 400);
}

TEST(ServiceTest, SingleBlockCoversThePlane) {
  PView view;
  view.schema = MixedSchema();
  view.params = IdentityParams(1.0);
  view.blocks = {{{{0, 4}, {0, 2}, {0, 7}}, 120.0, 0}};
  ViewService service(Shared(view));
  json body = json::parse(service.GetBlocks("age", "color").body);
  ASSERT_EQ(body["rects"].size(), 1u);
  EXPECT_EQ(body["rects"][0]["x"], json({0, 4}));
  EXPECT_EQ(body["rects"][0]["y"], json({0, 2}));
  EXPECT_DOUBLE_EQ(body["rects"][0]["density"].get<double>(), 120.0 / 15);
  EXPECT_EQ(body["min_density"], body["max_density"]);
}

// Starts the server from nothing but a view file on disk.
TEST(ServiceIntegrationTest, ServesAViewFileOverHttp) {
  const std::string dir = ::testing::TempDir() + "/service_only";
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/view.hdpv";
  const PView built = BuiltView(9);
  ASSERT_TRUE(WriteViewFile(path, built).ok());

  auto loaded = ReadViewFile(path);
  ASSERT_TRUE(loaded.ok());
  auto service = std::make_shared<const ViewService>(Shared(std::move(*loaded)));
  ViewServer server(service, {.host = "127.0.0.1", .port = 0,
                              .cors_origin = "http://localhost:5173"});
  auto port = server.Bind();
  ASSERT_TRUE(port.ok()) << port.status();
  std::thread loop([&] { EXPECT_TRUE(server.Listen().ok()); });

  httplib::Client client("127.0.0.1", *port);
  client.set_connection_timeout(5);
  auto schema = client.Get("/schema");
  ASSERT_TRUE(schema);
  EXPECT_EQ(schema->status, 200);
  EXPECT_EQ(schema->get_header_value("Access-Control-Allow-Origin"),
            "http://localhost:5173");
  EXPECT_THAT(schema->get_header_value("Content-Type"),
              HasSubstr("application/json"));

  const std::string body = R"({"ranges": {"age": {"lo": 0, "hi": 2}}})";
  auto a = client.Post("/query", body, "application/json");
  auto b = client.Post("/query", body, "application/json");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->status, 200);
  json ja = json::parse(a->body);
  json jb = json::parse(b->body);
  EXPECT_EQ(ja["answer"].get<double>(),
            *Answer(built, {{{0, 2}, {0, 2}, {0, 7}}}));
  ja.erase("elapsed_ms");
  jb.erase("elapsed_ms");
  EXPECT_EQ(ja.dump(), jb.dump());

  auto bad = client.Post("/query", "{", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto blocks = client.Get("/blocks?x=age&y=color");
  ASSERT_TRUE(blocks);
  EXPECT_EQ(blocks->status, 200);
  auto preflight = client.Options("/query");
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);

  server.Stop();
  loop.join();
}

}  // namespace
}  // namespace pview
