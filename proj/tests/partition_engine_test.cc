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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "pview/aggregation_error.h"
#include "pview/bisection.h"
#include "pview/params.h"

namespace pview {
namespace {

using ::pview::testing::DenseTensor;
using ::pview::testing::FullRanges;
using ::pview::testing::IndexSchema;
using ::pview::testing::NaiveAe;
using ::pview::testing::NaiveCutQualities;
using ::pview::testing::RandomDomains;
using ::pview::testing::RandomRanges;
using ::pview::testing::RandomTensor;
using ::pview::testing::Tensor1D;

MechanismParams HandParams(double theta, double delta, double lambda = 1.0) {
  MechanismParams p;
  p.theta = theta;
  p.delta = delta;
  p.lambda = lambda;
  p.epsilon_p = 1.0 / theta;
  p.kappa = 100.0;
  p.epsilon_cut = 0.01;
  return p;
}

TEST(AggregationErrorTest, Examples) {
  EXPECT_DOUBLE_EQ(AggregationError(RootBlock(Tensor1D({1, 3}))), 2.0);
  std::vector<int64_t> spike(10, 0);
  spike[4] = 10;
  EXPECT_DOUBLE_EQ(AggregationError(RootBlock(Tensor1D(spike))), 18.0);
  EXPECT_DOUBLE_EQ(AggregationError(RootBlock(Tensor1D({7, 7, 7}))), 0.0);
  EXPECT_DOUBLE_EQ(AggregationError(RootBlock(Tensor1D({0, 0, 0}))), 0.0);
}

TEST(AggregationErrorTest, SparseMatchesDenseOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    auto domains = RandomDomains(rng, 4, 6);
    CountTensor tensor = RandomTensor(domains, 0.3, 9, rng);
    DenseTensor dense = DenseTensor::From(tensor);
    Ranges r = RandomRanges(FullRanges(domains), rng);
    auto block = BlockFromRanges(tensor, r);
    ASSERT_TRUE(block.ok());
    EXPECT_NEAR(AggregationError(*block), NaiveAe(dense, r), 1e-9);
  }
}

TEST(AggregationErrorTest, SubBlocksNeverExceedTheirParent) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    auto domains = RandomDomains(rng, 3, 6);
    CountTensor tensor = RandomTensor(domains, 0.4, 20, rng);
    Ranges outer = RandomRanges(FullRanges(domains), rng);
    Ranges inner = RandomRanges(outer, rng);
    auto b = BlockFromRanges(tensor, outer);
    auto s = BlockFromRanges(tensor, inner);
    ASSERT_TRUE(b.ok() && s.ok());
    EXPECT_LE(AggregationError(*s), AggregationError(*b) + 1e-9);
  }
}

TEST(AggregationErrorTest, SplittingCanIncreaseTotalError) {
  Block parent = RootBlock(Tensor1D({0, 0, 10, 0, 2, 2}));
  EXPECT_NEAR(AggregationError(parent), 46.0 / 3.0, 1e-12);
  auto children = SplitBlock(parent, 0, 2);
  ASSERT_TRUE(children.ok());
  const double left = AggregationError(children->first);
  const double right = AggregationError(children->second);
  EXPECT_NEAR(left, 40.0 / 3.0, 1e-12);
  EXPECT_NEAR(right, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(left + right, 16.0, 1e-12);
  EXPECT_GT(left + right, AggregationError(parent));
}

TEST(AggregationErrorTest, SingleCellChangesRespectSensitivity) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto domains = RandomDomains(rng, 3, 4);
    CountTensor tensor = RandomTensor(domains, 0.5, 5, rng);
    DenseTensor dense = DenseTensor::From(tensor);
    const Ranges full = FullRanges(domains);
    const std::vector<int64_t> values = dense.Values(full);
    const double base = NaiveAe(values);
    const double bound = *AeSensitivity(static_cast<double>(values.size()));
    for (size_t i = 0; i < values.size(); ++i) {
      for (int step : {-1, 1}) {
        if (values[i] + step < 0) continue;
        std::vector<int64_t> neighbor = values;
        neighbor[i] += step;
        EXPECT_LE(std::fabs(NaiveAe(neighbor) - base), bound + 1e-9);
      }
    }
  }
}

TEST(SensitivityTest, Values) {
  EXPECT_DOUBLE_EQ(*AeSensitivity(1), 0.0);
  EXPECT_DOUBLE_EQ(*AeSensitivity(2), 1.0);
  EXPECT_NEAR(*AeSensitivity(1e12), 2.0, 1e-11);
  EXPECT_LT(*AeSensitivity(1e12), kAeSensitivityBound);
  EXPECT_FALSE(AeSensitivity(0).ok());
  EXPECT_FALSE(AeSensitivity(0.5).ok());
}

TEST(BiasedAggregationErrorTest, Examples) {
  const MechanismParams p = HandParams(10, 5);
  EXPECT_DOUBLE_EQ(BiasedAggregationError(30, 2, p), 20.0);
  EXPECT_DOUBLE_EQ(BiasedAggregationError(0, 1, p), 7.0);
}

TEST(BiasedAggregationErrorTest, FloorHoldsEverywhere) {
  const MechanismParams p = HandParams(10, 5);
  for (double ae = 0; ae < 100; ae += 0.5) {
    for (int k = 1; k < 30; ++k) {
      const double bae = BiasedAggregationError(ae, k, p);
      EXPECT_GE(bae, p.theta + 2 - p.delta);
      if (ae - k * p.delta > p.theta + 2 - p.delta) {
        EXPECT_EQ(bae, ae - k * p.delta);
      }
    }
  }
}

TEST(BiasedAggregationErrorTest, UsesBlockDepthPlusOne) {
  const MechanismParams p = HandParams(10, 5);
  auto block = BlockFromRanges(Tensor1D({0, 30}), {{0, 1}}, /*depth=*/1);
  ASSERT_TRUE(block.ok());
  EXPECT_EQ(BisectionDepth(*block), 2);
  EXPECT_DOUBLE_EQ(BiasedAggregationError(*block, p), 20.0);
}

TEST(ConvergeTestTest, NoiseFreeComparisons) {
  const MechanismParams p = HandParams(10, 5);
  EngineOptions quiet;
  quiet.noise_free = true;
  RandomStream rng(1);
  auto busy = BlockFromRanges(Tensor1D({0, 30}), {{0, 1}}, 1);
  EXPECT_FALSE(*ConvergeTest(*busy, p, rng, quiet));
  Block flat = RootBlock(Tensor1D({4, 4}));
  EXPECT_TRUE(*ConvergeTest(flat, p, rng, quiet));
}

TEST(ConvergeTestTest, HalfTheMassAtTheThreshold) {
  // AE 30 at k = 2 gives BAE 20, which equals theta.
  const MechanismParams p = HandParams(20, 5, 3.0);
  auto block = BlockFromRanges(Tensor1D({0, 30}), {{0, 1}}, 1);
  ASSERT_DOUBLE_EQ(BiasedAggregationError(*block, p), p.theta);
  RandomStream rng(8);
  constexpr int kTrials = 100000;
  int converged = 0;
  for (int i = 0; i < kTrials; ++i) converged += *ConvergeTest(*block, p, rng);
  EXPECT_NEAR(static_cast<double>(converged) / kTrials, 0.5,
              3 * std::sqrt(0.25 / kTrials));
}

TEST(QualityTest, Examples) {
  Block b = RootBlock(Tensor1D({0, 0, 10, 10}));
  EXPECT_NEAR(*Quality(b, 0, 1), 0.0, 1e-12);
  EXPECT_NEAR(*Quality(b, 0, 2), -40.0 / 3.0, 1e-12);
  EXPECT_FALSE(Quality(b, 0, 3).ok());
  EXPECT_FALSE(Quality(b, 1, 0).ok());
  Block flat = RootBlock(Tensor1D({5, 5, 5}));
  for (const auto& c : CutQualities(flat)) EXPECT_EQ(c.quality, 0.0);
}

TEST(QualityTest, IncrementalSweepMatchesNaiveOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    auto domains = RandomDomains(rng, 4, 6);
    CountTensor tensor = RandomTensor(domains, trial % 3 == 0 ? 0.9 : 0.25,
                                      trial % 2 == 0 ? 3 : 50, rng);
    DenseTensor dense = DenseTensor::From(tensor);
    Ranges r = RandomRanges(FullRanges(domains), rng);
    auto block = BlockFromRanges(tensor, r);
    ASSERT_TRUE(block.ok());
    auto fast = CutQualities(*block);
    auto slow = NaiveCutQualities(dense, r);
    ASSERT_EQ(fast.size(), slow.size());
    ASSERT_EQ(fast.size(), block->CutCandidateCount());
    for (size_t i = 0; i < fast.size(); ++i) {
      EXPECT_EQ(fast[i].axis, slow[i].axis);
      EXPECT_EQ(fast[i].position, slow[i].position);
      EXPECT_NEAR(fast[i].quality, slow[i].quality, 1e-9);
      EXPECT_LE(fast[i].quality, 1e-12);
    }
  }
}

TEST(DeriveParamsTest, DefaultsAtUnitBudget) {
  auto p = DeriveParams(Hyperparams{}, 10.0);
  ASSERT_TRUE(p.ok());
  EXPECT_NEAR(p->epsilon_r, 0.9, 1e-12);
  EXPECT_NEAR(p->epsilon_p, 0.1, 1e-12);
  EXPECT_NEAR(p->theta, 10.0, 1e-9);
  EXPECT_NEAR(p->lambda, (2.8 / 0.6) * (2 / 0.81), 1e-12);
  EXPECT_NEAR(p->lambda, 11.522633, 1e-6);
  EXPECT_NEAR(p->delta, 11.522633 * std::log(1.6), 1e-5);
  EXPECT_NEAR(p->delta, 5.41568, 1e-5);
  EXPECT_NEAR(std::exp(p->delta / p->lambda), 1.6, 1e-12);
  EXPECT_NEAR(p->kappa, 12.0, 1e-12);
  EXPECT_NEAR(p->epsilon_cut, 0.0075, 1e-12);
  EXPECT_EQ(p->epsilon_r + p->epsilon_p, 1.0);
}

TEST(DeriveParamsTest, Errors) {
  Hyperparams hp;
  hp.alpha = 1.0;
  EXPECT_FALSE(DeriveParams(hp, 10).ok());
  hp = Hyperparams{};
  hp.gamma = 0.0;
  EXPECT_FALSE(DeriveParams(hp, 10).ok());
  hp = Hyperparams{};
  hp.ratio = 0.0;
  EXPECT_FALSE(DeriveParams(hp, 10).ok());
  hp = Hyperparams{};
  hp.ratio = 1.0;
  EXPECT_FALSE(DeriveParams(hp, 10).ok());
  EXPECT_FALSE(DeriveParams(Hyperparams{}, 0.0).ok());
  hp = Hyperparams{};
  hp.epsilon_b = -1;
  EXPECT_FALSE(DeriveParams(hp, 10).ok());
}

TEST(DeriveParamsTest, RandomHyperparamsKeepIdentities) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int i = 0; i < 1000; ++i) {
    Hyperparams hp{unit(rng) * 10, unit(rng), 1 + unit(rng) * 3,
                   unit(rng) * 2, unit(rng)};
    auto p = DeriveParams(hp, 1 + unit(rng) * 60);
    ASSERT_TRUE(p.ok());
    EXPECT_NEAR(std::exp(p->delta / p->lambda), hp.alpha, 1e-12 * hp.alpha);
    EXPECT_EQ(BudgetOf(*p).Total(), hp.epsilon_b);
    EXPECT_EQ(p->epsilon_r + p->epsilon_p, hp.epsilon_b);
    EXPECT_NEAR(p->kappa * p->epsilon_cut, p->cut_budget, 1e-12);
  }
}

TEST(RandomCutTest, CandidateCounts) {
  EXPECT_EQ(RootBlock(Tensor1D({0, 0, 0, 0})).CutCandidateCount(), 3u);
  auto t = CountTensor::FromCells(IndexSchema({3, 2}), {});
  EXPECT_EQ(RootBlock(*t).CutCandidateCount(), 3u);
}

TEST(RandomCutTest, NoiseFreePicksBestCut) {
  auto p = DeriveParams(Hyperparams{}, 2.0);
  EngineOptions quiet;
  quiet.noise_free = true;
  RandomStream rng(1);
  auto cut = RandomCut(RootBlock(Tensor1D({0, 0, 10, 10})), *p, rng, quiet);
  ASSERT_TRUE(cut.ok());
  EXPECT_EQ(cut->axis, 0u);
  EXPECT_EQ(cut->position, 1u);
  EXPECT_EQ(cut->mechanism, CutMechanism::kExponential);
  EXPECT_EQ(cut->epsilon, p->epsilon_cut);
}

TEST(RandomCutTest, AtomicBlockIsAnError) {
  RandomStream rng(1);
  auto cut = RandomCut(RootBlock(Tensor1D({3})), HandParams(10, 5), rng);
  EXPECT_EQ(cut.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(RandomCutTest, UniformAndFreePastKappa) {
  MechanismParams p = HandParams(10, 5);
  p.kappa = 1.5;
  auto deep = BlockFromRanges(Tensor1D({0, 0, 50, 0}), {{0, 3}}, /*depth=*/1);
  RandomStream rng(6);
  std::vector<int> hits(3, 0);
  constexpr int kDraws = 30000;
  for (int i = 0; i < kDraws; ++i) {
    auto cut = RandomCut(*deep, p, rng);
    ASSERT_TRUE(cut.ok());
    EXPECT_EQ(cut->mechanism, CutMechanism::kUniform);
    EXPECT_EQ(cut->epsilon, 0.0);
    ++hits[cut->position];
  }
  const double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / kDraws);
  for (int h : hits) EXPECT_NEAR(h / double{kDraws}, 1.0 / 3, 3 * sigma);
}

TEST(RecursiveBisectionTest, UniformTensorConvergesAtRoot) {
  auto t = CountTensor::FromCells(IndexSchema({4, 4}), {});
  std::vector<std::pair<Coord, int64_t>> cells;
  for (uint32_t i = 0; i < 4; ++i)
    for (uint32_t j = 0; j < 4; ++j) cells.push_back({{i, j}, 3});
  t = CountTensor::FromCells(IndexSchema({4, 4}), cells);
  auto p = DeriveParams(Hyperparams{}, 4.0);
  EngineOptions quiet;
  quiet.noise_free = true;
  auto part = RecursiveBisection(RootBlock(*t), *p, RandomStream(1), quiet);
  ASSERT_TRUE(part.ok());
  ASSERT_EQ(part->blocks.size(), 1u);
  EXPECT_EQ(part->blocks[0].sum, 48);
  EXPECT_EQ(part->blocks[0].depth, 0u);
}

TEST(RecursiveBisectionTest, SingleCellDomain) {
  auto t = CountTensor::FromCells(IndexSchema({1, 1}), {{{0, 0}, 9}});
  auto part = RecursiveBisection(RootBlock(*t), HandParams(10, 1),
                                 RandomStream(1));
  ASSERT_TRUE(part.ok());
  ASSERT_EQ(part->blocks.size(), 1u);
  EXPECT_EQ(part->blocks[0].depth, 0u);
  EXPECT_EQ(part->blocks[0].sum, 9);
}

TEST(RecursiveBisectionTest, FirstCutSeparatesTwoClusters) {
  const std::vector<int64_t> domains = {8, 8};
  auto t = CountTensor::FromCells(IndexSchema(domains),
                                  {{{0, 1}, 1000}, {{7, 6}, 1000}});
  auto p = DeriveParams(Hyperparams{}, 6.0);
  EngineOptions quiet;
  quiet.noise_free = true;
  quiet.keep_cut_log = true;
  auto part = RecursiveBisection(RootBlock(*t), *p, RandomStream(1), quiet);
  ASSERT_TRUE(part.ok());
  ASSERT_GE(part->blocks.size(), 2u);
  ASSERT_FALSE(part->cut_log.empty());
  const CutRecord& first = part->cut_log.front();
  EXPECT_EQ(first.path, "");
  EXPECT_EQ(first.k, 1);

  auto naive = NaiveCutQualities(DenseTensor::From(*t), FullRanges(domains));
  auto best = std::max_element(
      naive.begin(), naive.end(),
      [](const auto& a, const auto& b) { return a.quality < b.quality; });
  EXPECT_EQ(first.choice.axis, best->axis);
  EXPECT_EQ(first.choice.position, best->position);
  // The cut leaves one mass on each side.
  const uint32_t a = first.choice.axis == 0 ? 0u : 1u;
  const uint32_t b = first.choice.axis == 0 ? 7u : 6u;
  EXPECT_LE(a, first.choice.position);
  EXPECT_GT(b, first.choice.position);
}

void ExpectValidPartition(const Partition& part, const CountTensor& tensor) {
  const auto domains = tensor.schema().DomainSizes();
  DenseTensor dense = DenseTensor::From(tensor);
  DenseTensor owner(domains);
  int64_t total = 0;
  for (size_t i = 0; i < part.blocks.size(); ++i) {
    const auto& b = part.blocks[i];
    int64_t sum = 0;
    dense.ForEach(b.ranges, [&](const Coord& c) {
      ++owner.at(c);
      sum += dense.at(c);
    });
    EXPECT_EQ(sum, b.sum);
    total += sum;
    if (i > 0) {
      EXPECT_LT(part.blocks[i - 1].ranges, b.ranges);
    }
  }
  owner.ForEach(FullRanges(domains),
                [&](const Coord& c) { ASSERT_EQ(owner.at(c), 1); });
  EXPECT_EQ(total, tensor.total_count());
}

TEST(RecursiveBisectionTest, PartitionsCoverDisjointlyAndConserveSums) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto domains = RandomDomains(rng, 3, 7);
    if (std::all_of(domains.begin(), domains.end(),
                    [](int64_t d) { return d == 1; })) {
      domains[0] = 2;
    }
    CountTensor tensor = RandomTensor(domains, 0.3, 40, rng);
    Hyperparams hp;
    hp.epsilon_b = trial % 2 ? 0.1 : 5.0;
    auto p = DeriveParams(hp, tensor.schema().TotalDomainLog2());
    ASSERT_TRUE(p.ok());
    auto part = RecursiveBisection(RootBlock(tensor), *p, RandomStream(trial));
    ASSERT_TRUE(part.ok());
    ExpectValidPartition(*part, tensor);
  }
}

TEST(RecursiveBisectionTest, CutLogDepthsAndBudgetPerPath) {
  std::mt19937_64 rng(8);
  CountTensor tensor = RandomTensor({16, 16}, 0.2, 30, rng);
  Hyperparams hp;
  hp.epsilon_b = 10.0;
  hp.beta = 0.3;  // kappa = 2.4, so uniform cuts appear quickly
  auto p = DeriveParams(hp, 8.0);
  EngineOptions options;
  options.keep_cut_log = true;
  auto part = RecursiveBisection(RootBlock(tensor), *p, RandomStream(3), options);
  ASSERT_TRUE(part.ok());
  bool saw_uniform = false;
  for (const auto& r : part->cut_log) {
    EXPECT_EQ(r.k, static_cast<int>(r.path.size()) + 1);
    if (r.k <= p->kappa) {
      EXPECT_EQ(r.choice.mechanism, CutMechanism::kExponential);
    } else {
      EXPECT_EQ(r.choice.mechanism, CutMechanism::kUniform);
      saw_uniform = true;
    }
  }
  EXPECT_TRUE(saw_uniform);
  for (size_t i = 0; i < part->blocks.size(); ++i) {
    EXPECT_EQ(part->blocks[i].depth, part->blocks[i].path.size());
  }
  for (double spent : CutBudgetPerBlock(*part)) {
    EXPECT_LE(spent, p->cut_budget * (1 + 1e-12));
  }
}

TEST(RecursiveBisectionTest, EmptyTensor) {
  auto t = CountTensor::FromCells(IndexSchema({16, 16}), {});
  auto result = BuildView(*t, Hyperparams{}, {.seed = 4});
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(result->view.Validate().ok());
  ExpectValidPartition(result->partition, *t);
}

TEST(RecursiveBisectionTest, ThreadsDoNotChangeTheResult) {
  std::mt19937_64 rng(9);
  CountTensor tensor = RandomTensor({12, 10, 6}, 0.1, 100, rng);
  BuildOptions one{.seed = 77};
  one.engine.keep_cut_log = true;
  BuildOptions four = one;
  four.engine.threads = 4;
  auto a = BuildView(tensor, Hyperparams{}, one);
  auto b = BuildView(tensor, Hyperparams{}, one);
  auto c = BuildView(tensor, Hyperparams{}, four);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  for (const auto* other : {&*b, &*c}) {
    ASSERT_EQ(a->view.blocks.size(), other->view.blocks.size());
    for (size_t i = 0; i < a->view.blocks.size(); ++i) {
      EXPECT_EQ(a->view.blocks[i].ranges, other->view.blocks[i].ranges);
      EXPECT_EQ(a->view.blocks[i].noisy_sum, other->view.blocks[i].noisy_sum);
      EXPECT_EQ(a->view.blocks[i].depth, other->view.blocks[i].depth);
    }
    ASSERT_EQ(a->partition.cut_log.size(), other->partition.cut_log.size());
    for (size_t i = 0; i < a->partition.cut_log.size(); ++i) {
      EXPECT_EQ(a->partition.cut_log[i].path, other->partition.cut_log[i].path);
      EXPECT_EQ(a->partition.cut_log[i].choice.position,
                other->partition.cut_log[i].choice.position);
    }
  }
  auto d = BuildView(tensor, Hyperparams{}, {.seed = 78});
  ASSERT_TRUE(d.ok());
  EXPECT_NE(a->view.blocks[0].noisy_sum, d->view.blocks[0].noisy_sum);
}

TEST(PerturbTest, NoiseFreeKeepsSums) {
  std::mt19937_64 rng(10);
  CountTensor tensor = RandomTensor({6, 6}, 0.5, 9, rng);
  BuildOptions options{.seed = 1};
  options.engine.noise_free = true;
  auto result = BuildView(tensor, Hyperparams{}, options);
  ASSERT_TRUE(result.ok());
  for (size_t i = 0; i < result->view.blocks.size(); ++i) {
    EXPECT_EQ(result->view.blocks[i].noisy_sum,
              static_cast<double>(result->partition.blocks[i].sum));
  }
}

TEST(PerturbTest, NoiseMoments) {
  Partition part;
  part.blocks.push_back({{{0, 3}}, 25, 0, ""});
  auto p = DeriveParams(Hyperparams{}, 2.0);
  ASSERT_NEAR(p->epsilon_p, 0.1, 1e-12);
  const Schema schema = IndexSchema({4});
  RandomStream rng(12);
  constexpr int kReps = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kReps; ++i) {
    auto view = Perturb(part, schema, *p, rng);
    ASSERT_TRUE(view.ok());
    const double z = view->blocks[0].noisy_sum - 25.0;
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / kReps;
  const double var = sum_sq / kReps - mean * mean;
  const double expected_var = 2.0 / (p->epsilon_p * p->epsilon_p);
  EXPECT_NEAR(std::sqrt(expected_var), 14.14, 0.01);
  EXPECT_NEAR(mean, 0.0, 3.0 * std::sqrt(expected_var / kReps));
  EXPECT_NEAR(var, expected_var, 0.05 * expected_var);
}

}  // namespace
}  // namespace pview
