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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "pview/evaluation.h"
#include "pview/experiment.h"
#include "pview/query.h"
#include "pview/workload.h"

namespace pview {
namespace {

using ::pview::testing::IndexSchema;
using ::pview::testing::Tensor1D;
using ::testing::HasSubstr;

TEST(WorkloadTest, MarginalCounts) {
  const Schema schema = IndexSchema({2, 3});
  EXPECT_EQ(GenKwayMarginal(schema, 1)->queries.size(), 5u);
  EXPECT_EQ(GenKwayMarginal(schema, 2)->queries.size(), 6u);
  EXPECT_EQ(GenKwayMarginal(IndexSchema({1, 1, 1}), 3)->queries.size(), 1u);
  EXPECT_FALSE(GenKwayMarginal(schema, 0).ok());
  EXPECT_FALSE(GenKwayMarginal(schema, 3).ok());
}

TEST(WorkloadTest, MarginalsPartitionTheDomainPerSubset) {
  // For each attribute subset the marginal cells tile the domain exactly.
  const Schema schema = IndexSchema({3, 4, 2});
  auto w = GenKwayMarginal(schema, 2);
  ASSERT_TRUE(w.ok());
  EXPECT_EQ(w->queries.size(), 3u * 4 + 3 * 2 + 4 * 2);
  PView ones;
  ones.schema = schema;
  ones.params = IdentityParams(1);
  ones.blocks.push_back({{{0, 2}, {0, 3}, {0, 1}}, 24.0, 0});
  double total = 0.0;
  for (const auto& q : w->queries) total += *Answer(ones, q);
  EXPECT_NEAR(total, 3 * 24.0, 1e-9);
}

TEST(WorkloadTest, PrefixEnumeration) {
  auto w = GenPrefix(IndexSchema({4}), 1);
  ASSERT_TRUE(w.ok());
  ASSERT_EQ(w->queries.size(), 4u);
  for (uint32_t e = 0; e < 4; ++e) {
    EXPECT_EQ(w->queries[e].ranges[0], (IndexRange{0, e}));
  }
}

TEST(WorkloadTest, KwayRangeEnumeratesAllIntervals) {
  RandomStream rng(1);
  auto w = GenKwayRange(IndexSchema({4, 3}), 1, 1000, rng);
  ASSERT_TRUE(w.ok());
  // 10 + 6 intervals, minus the full-domain query that both axes produce.
  EXPECT_EQ(w->queries.size(), 10u + 6u - 1u);
  std::set<std::pair<uint32_t, uint32_t>> seen;
  for (size_t i = 0; i < 10; ++i) {
    const auto r = w->queries[i].ranges[0];
    EXPECT_LE(r.lo, r.hi);
    seen.insert({r.lo, r.hi});
    EXPECT_EQ(w->queries[i].ranges[1], (IndexRange{0, 2}));
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(WorkloadTest, KwayRangeLimitZeroIsAnError) {
  RandomStream rng(1);
  EXPECT_FALSE(GenKwayRange(IndexSchema({4, 3}), 1, 0, rng).ok());
}

TEST(WorkloadTest, SubsamplingGivesDistinctValidQueries) {
  const Schema schema = IndexSchema({30, 30, 30});
  for (uint64_t limit : {50u, 400000u}) {
    RandomStream rng(2);
    auto w = GenKwayRange(schema, 2, limit, rng);
    ASSERT_TRUE(w.ok());
    EXPECT_EQ(w->queries.size(), limit);
    std::set<std::vector<IndexRange>> distinct;
    for (const auto& q : w->queries) {
      EXPECT_TRUE(q.Validate(schema).ok());
      distinct.insert(q.ranges);
    }
    EXPECT_EQ(distinct.size(), limit);
  }
}

TEST(WorkloadTest, RandomRangeCountAndValidity) {
  const Schema schema = IndexSchema({7, 5, 9, 2});
  RandomStream rng(3);
  auto w = GenRandomRange(schema, 2, 3000, rng);
  ASSERT_TRUE(w.ok());
  ASSERT_EQ(w->queries.size(), 3000u);
  const auto full = RangeQuery::FullDomain(schema);
  std::map<std::pair<int, int>, int> subsets;
  for (const auto& q : w->queries) {
    EXPECT_TRUE(q.Validate(schema).ok());
    int restricted = 0;
    for (size_t a = 0; a < 4; ++a) restricted += q.ranges[a] != full.ranges[a];
    EXPECT_LE(restricted, 2);
  }
  EXPECT_FALSE(GenRandomRange(schema, 2, 0, rng).ok());
  EXPECT_FALSE(GenRandomRange(schema, 5, 10, rng).ok());
}

TEST(WorkloadTest, GeneratorsAreDeterministic) {
  const Schema schema = IndexSchema({10, 10, 10});
  RandomStream a(5);
  RandomStream b(5);
  auto wa = GenRandomRange(schema, 2, 100, a);
  auto wb = GenRandomRange(schema, 2, 100, b);
  for (size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(wa->queries[i], wb->queries[i]);
  }
  // Enumerations do not consume randomness.
  EXPECT_EQ(GenPrefix(schema, 2)->queries, GenPrefix(schema, 2)->queries);
}

TEST(WorkloadTest, RandomIntervalIsUniform) {
  RandomStream rng(6);
  constexpr int kDraws = 150000;
  std::map<std::pair<uint32_t, uint32_t>, int> hits;
  for (int i = 0; i < kDraws; ++i) {
    const IndexRange r = RandomInterval(5, rng);
    ASSERT_LE(r.lo, r.hi);
    ASSERT_LT(r.hi, 5u);
    ++hits[{r.lo, r.hi}];
  }
  ASSERT_EQ(hits.size(), 15u);
  const double p = 1.0 / 15;
  for (const auto& [range, n] : hits) {
    EXPECT_NEAR(n / double{kDraws}, p, 3 * std::sqrt(p * (1 - p) / kDraws));
  }
}

TEST(RmseTest, Examples) {
  std::vector<double> truth = {10};
  std::vector<double> noisy = {13};
  EXPECT_DOUBLE_EQ(*RmseOf(truth, noisy), 3.0);
  std::vector<double> t2 = {1, 2, 3, 4};
  std::vector<double> e2 = {2, 2, 5, 0};
  std::vector<double> t2r = {4, 3, 2, 1};
  std::vector<double> e2r = {0, 5, 2, 2};
  EXPECT_DOUBLE_EQ(*RmseOf(t2, e2), *RmseOf(t2r, e2r));
  EXPECT_DOUBLE_EQ(*RmseOf(t2, e2), std::sqrt((1 + 0 + 4 + 16) / 4.0));
  EXPECT_FALSE(RmseOf({}, {}).ok());
  EXPECT_FALSE(RmseOf(t2, truth).ok());
}

TEST(RmseTest, ExactCellViewHasZeroError) {
  CountTensor tensor = Tensor1D({3, 0, 5, 1, 1});
  RandomStream rng(1);
  auto view = IdentityView(tensor, 1.0, rng, {.noise_free = true});
  ASSERT_TRUE(view.ok());
  auto w = GenPrefix(tensor.schema(), 1);
  EXPECT_EQ(*Rmse(*w, tensor, *view), 0.0);
  EXPECT_EQ(*Rmse(*w, tensor, *view, /*threads=*/3), 0.0);
  EXPECT_FALSE(Rmse(Workload{}, tensor, *view).ok());
}

TEST(IdentityTest, SingleCell) {
  auto tensor = CountTensor::FromCells(IndexSchema({1, 1}), {{{0, 0}, 42}});
  RandomStream rng(1);
  auto view = IdentityView(*tensor, 1.0, rng, {.noise_free = true});
  ASSERT_TRUE(view.ok());
  ASSERT_EQ(view->blocks.size(), 1u);
  EXPECT_EQ(view->blocks[0].noisy_sum, 42.0);
  EXPECT_EQ(view->meta.mechanism, "identity");
}

TEST(IdentityTest, OneBlockPerCellInCanonicalOrder) {
  std::mt19937_64 gen(2);
  CountTensor tensor = testing::RandomTensor({3, 4, 2}, 0.3, 9, gen);
  RandomStream rng(1);
  auto view = IdentityView(tensor, 1.0, rng, {.noise_free = true});
  ASSERT_TRUE(view.ok());
  ASSERT_EQ(view->blocks.size(), 24u);
  EXPECT_TRUE(view->Validate().ok());
  for (size_t i = 1; i < view->blocks.size(); ++i) {
    EXPECT_LT(view->blocks[i - 1].ranges, view->blocks[i].ranges);
  }
  for (const auto& b : view->blocks) {
    Coord c;
    for (const auto& r : b.ranges) c.push_back(r.lo);
    EXPECT_EQ(b.noisy_sum, static_cast<double>(tensor.CountAt(c)));
  }
}

TEST(IdentityTest, RangeVarianceIsTwoCOverEpsilonSquared) {
  CountTensor tensor = Tensor1D({5, 0, 2, 7, 1, 0});
  const double epsilon = 0.5;
  const RangeQuery q{{{1, 4}}};  // c = 4 cells
  const double truth = 10.0;
  RandomStream rng(3);
  constexpr int kDraws = 20000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    auto view = IdentityView(tensor, epsilon, rng);
    const double err = *Answer(*view, q) - truth;
    sum += err;
    sum_sq += err * err;
  }
  const double mean = sum / kDraws;
  const double var = sum_sq / kDraws - mean * mean;
  const double expected = 2.0 * 4 / (epsilon * epsilon);
  EXPECT_NEAR(var, expected, 0.05 * expected);
}

TEST(IdentityTest, PerCellVariance) {
  CountTensor tensor = Tensor1D({4});
  RandomStream rng(4);
  constexpr int kDraws = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = IdentityView(tensor, 2.0, rng)->blocks[0].noisy_sum - 4;
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / kDraws;
  EXPECT_NEAR(sum_sq / kDraws - mean * mean, 0.5, 0.05 * 0.5);
}

TEST(IdentityTest, RefusesHugeDomains) {
  auto tensor = CountTensor::FromCells(
      IndexSchema(std::vector<int64_t>(10, 100)), {});  // 10^20 cells
  RandomStream rng(1);
  auto view = IdentityView(*tensor, 1.0, rng);
  EXPECT_EQ(view.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_THAT(view.status().message(), HasSubstr("refuses"));
}

TEST(SyntheticTest, GeneratorsProduceRequestedRecords) {
  RandomStream rng(1);
  auto clustered = ClusteredData({16, 16, 8}, 5000, 4, 0.05, rng);
  auto uniform = UniformData({16, 16, 8}, 5000, rng);
  auto spike = ConcentratedData({100, 100, 100}, 5000, rng);
  ASSERT_TRUE(clustered.ok() && uniform.ok() && spike.ok());
  EXPECT_EQ(clustered->total_count(), 5000);
  EXPECT_EQ(uniform->total_count(), 5000);
  EXPECT_EQ(spike->total_count(), 5000);
  // A tight cluster touches a small share of a million cells.
  EXPECT_LT(spike->cells().size(), 10000u);
  RandomStream again(1);
  auto replay = ClusteredData({16, 16, 8}, 5000, 4, 0.05, again);
  EXPECT_EQ(replay->cells().counts(), clustered->cells().counts());
  EXPECT_FALSE(UniformData({0}, 10, rng).ok());
}

nlohmann::json MinimalConfig() {
  return nlohmann::json::parse(R"({
    "dataset": {"generator": "clustered", "domains": [8, 8], "n": 2000,
                "clusters": 2, "seed": 1},
    "mechanisms": ["bisection"],
    "workloads": [{"kind": "random_range", "k": 2, "count": 50}],
    "epsilons": [1.0],
    "seeds": [7]
  })");
}

TEST(ExperimentTest, OneSeedOneRow) {
  auto config = ExperimentConfig::FromJson(MinimalConfig());
  ASSERT_TRUE(config.ok()) << config.status();
  auto report = RunExperiment(*config);
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->rows.size(), 1u);
  EXPECT_EQ(report->rows[0].rmse.size(), 1u);
  EXPECT_EQ(report->rows[0].rmse_std, 0.0);
  EXPECT_EQ(report->rows[0].relative_rmse, 1.0);
  EXPECT_GT(report->rows[0].blocks_mean, 0.0);
}

TEST(ExperimentTest, MeansAndRelativeColumn) {
  nlohmann::json j = MinimalConfig();
  j["mechanisms"] = {"bisection", "identity"};
  j["seeds"] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  j["workloads"].push_back({{"kind", "prefix"}, {"k", 1}});
  const std::string path = ::testing::TempDir() + "/report.jsonl";
  std::remove(path.c_str());
  j["output"] = path;
  auto report = RunExperiment(*ExperimentConfig::FromJson(j));
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->rows.size(), 4u);
  std::map<std::string, double> bisection_mean;
  for (const auto& row : report->rows) {
    ASSERT_EQ(row.rmse.size(), 10u);
    double sum = 0.0;
    for (double r : row.rmse) sum += r;
    EXPECT_NEAR(row.rmse_mean, sum / 10, 1e-12);
    if (row.mechanism == "bisection") bisection_mean[row.workload] = row.rmse_mean;
  }
  for (const auto& row : report->rows) {
    ASSERT_TRUE(row.relative_rmse.has_value());
    EXPECT_NEAR(*row.relative_rmse, row.rmse_mean / bisection_mean[row.workload],
                1e-12);
    if (row.mechanism == "identity") EXPECT_EQ(row.blocks_mean, 64.0);
  }
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    auto parsed = nlohmann::json::parse(line);
    EXPECT_TRUE(parsed.contains("type"));
    ++lines;
  }
  EXPECT_EQ(lines, 5);
  EXPECT_THAT(report->RenderTable(), HasSubstr("identity"));
}

TEST(ExperimentTest, IdentityRefusalIsReportedNotFatal) {
  nlohmann::json j = MinimalConfig();
  j["mechanisms"] = {"bisection", "identity"};
  j["identity_dense_limit"] = 10;
  auto report = RunExperiment(*ExperimentConfig::FromJson(j));
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->rows.size(), 2u);
  EXPECT_THAT(report->rows[1].error, HasSubstr("refuses"));
  EXPECT_THAT(report->RenderTable(), HasSubstr("skipped"));
}

TEST(ExperimentTest, InvalidConfigs) {
  nlohmann::json j = MinimalConfig();
  j["bogus"] = 1;
  EXPECT_FALSE(ExperimentConfig::FromJson(j).ok());
  j = MinimalConfig();
  j["dataset"]["colour"] = "red";
  EXPECT_FALSE(ExperimentConfig::FromJson(j).ok());
  j = MinimalConfig();
  j["workloads"][0]["kind"] = "cube";
  EXPECT_FALSE(ExperimentConfig::FromJson(j).ok());
  j = MinimalConfig();
  j["mechanisms"] = {"privtree"};
  EXPECT_FALSE(ExperimentConfig::FromJson(j).ok());
  j = MinimalConfig();
  j["workloads"] = nlohmann::json::array();
  EXPECT_FALSE(ExperimentConfig::FromJson(j).ok());
  j = MinimalConfig();
  j["epsilons"] = "one";
  EXPECT_FALSE(ExperimentConfig::FromJson(j).ok());
}

}  // namespace
}  // namespace pview
