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

#ifndef PVIEW_BISECTION_H_
#define PVIEW_BISECTION_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "pview/block.h"
#include "pview/count_tensor.h"
#include "pview/params.h"
#include "pview/pview.h"
#include "pview/random_stream.h"

namespace pview {

struct EngineOptions {
  // Test hook: Laplace draws become 0 and the exponential mechanism picks
  // the first best candidate. Never use for a released view.
  bool noise_free = false;
  // Use 2(1 - 1/|B|) of the block being cut instead of the bound 2 for the
  // AE sensitivity in the cut mechanism.
  bool exact_sensitivity = false;
  bool keep_cut_log = false;
  // Subtrees are farmed out to threads near the root; results do not depend
  // on this value.
  int threads = 1;
};

enum class CutMechanism { kExponential, kUniform };

struct CutChoice {
  size_t axis = 0;
  uint32_t position = 0;
  CutMechanism mechanism = CutMechanism::kExponential;
  double epsilon = 0.0;  // budget this cut consumed
};

// Paths spell the route from the root: '0' for a left child, '1' for right.
struct CutRecord {
  std::string path;
  int k = 0;
  CutChoice choice;
};

struct ConvergedBlock {
  Ranges ranges;
  int64_t sum = 0;
  uint32_t depth = 0;
  std::string path;  // filled only with keep_cut_log
};

struct Partition {
  std::vector<ConvergedBlock> blocks;  // canonical order by ranges
  std::vector<CutRecord> cut_log;      // sorted by path
};

// Noisy threshold test BAE(block) + Lap(lambda) <= theta. Consumes one
// uniform from `rng`.
absl::StatusOr<bool> ConvergeTest(const Block& block,
                                  const MechanismParams& params,
                                  RandomStream& rng,
                                  const EngineOptions& options = {});

// Picks a cut. While the bisection depth k (root = 1) is at most kappa the
// exponential mechanism runs over all cut qualities with epsilon_cut;
// deeper cuts are uniform over the candidates and free. Atomic blocks yield
// FailedPrecondition.
absl::StatusOr<CutChoice> RandomCut(const Block& block,
                                    const MechanismParams& params,
                                    RandomStream& rng,
                                    const EngineOptions& options = {});

// Depth-first converge-or-cut recursion from `root`. The stream of the block
// at path P is rng.Child(P[0]).Child(P[1])...; each block draws its converge
// noise first and then its cut. Blocks without a valid cut converge
// unconditionally.
absl::StatusOr<Partition> RecursiveBisection(const Block& root,
                                             const MechanismParams& params,
                                             const RandomStream& rng,
                                             const EngineOptions& options = {});

// Adds independent Laplace(1/epsilon_p) noise to every block sum, drawing
// sequentially from `rng` in the partition's canonical block order.
absl::StatusOr<PView> Perturb(const Partition& partition, const Schema& schema,
                              const MechanismParams& params, RandomStream& rng,
                              const EngineOptions& options = {});

struct BudgetBreakdown {
  double epsilon_b = 0.0;
  double epsilon_r = 0.0;
  double converge = 0.0;
  double cut = 0.0;
  double epsilon_p = 0.0;

  double Total() const { return (converge + cut) + epsilon_p; }
  nlohmann::json ToJson() const;
};

BudgetBreakdown BudgetOf(const MechanismParams& params);

struct BuildOptions {
  uint64_t seed = 0;
  EngineOptions engine;
  std::optional<std::string> timestamp;
};

struct BuildResult {
  PView view;
  Partition partition;
  BudgetBreakdown budget;
};

// Full build: derive parameters from the total domain, bisect from the root
// (stream Child(0) of the seed), then perturb (stream Child(1)).
absl::StatusOr<BuildResult> BuildView(const CountTensor& tensor,
                                      const Hyperparams& hyperparams,
                                      const BuildOptions& options);

// Cut budget spent along the root-to-leaf path of each converged block.
// Needs a partition built with keep_cut_log.
std::vector<double> CutBudgetPerBlock(const Partition& partition);

}  // namespace pview

#endif  // PVIEW_BISECTION_H_
