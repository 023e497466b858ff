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

#include "pview/bisection.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "pview/aggregation_error.h"
#include "pview/mechanisms.h"
#include "pview/status_macros.h"

namespace pview {

absl::StatusOr<bool> ConvergeTest(const Block& block,
                                  const MechanismParams& params,
                                  RandomStream& rng,
                                  const EngineOptions& options) {
  double noise = 0.0;
  if (!options.noise_free) {
    ASSIGN_OR_RETURN(noise, SampleLaplace(params.lambda, rng));
  }
  return BiasedAggregationError(block, params) + noise <= params.theta;
}

absl::StatusOr<CutChoice> RandomCut(const Block& block,
                                    const MechanismParams& params,
                                    RandomStream& rng,
                                    const EngineOptions& options) {
  const uint64_t candidates = block.CutCandidateCount();
  if (candidates == 0) {
    return absl::FailedPreconditionError("atomic block has no valid cut");
  }
  CutChoice choice;
  if (static_cast<double>(BisectionDepth(block)) <= params.kappa) {
    const std::vector<CutCandidate> cuts = CutQualities(block);
    std::vector<double> qualities(cuts.size());
    for (size_t i = 0; i < cuts.size(); ++i) qualities[i] = cuts[i].quality;

    size_t chosen = 0;
    if (options.noise_free) {
      chosen = static_cast<size_t>(
          std::max_element(qualities.begin(), qualities.end()) -
          qualities.begin());
    } else {
      double ae_sensitivity = kAeSensitivityBound;
      if (options.exact_sensitivity) {
        ASSIGN_OR_RETURN(ae_sensitivity, AeSensitivity(block.size()));
      }
      ASSIGN_OR_RETURN(chosen,
                       ExponentialChoice(qualities, params.epsilon_cut,
                                         2.0 * ae_sensitivity, rng));
    }
    choice.axis = cuts[chosen].axis;
    choice.position = cuts[chosen].position;
    choice.mechanism = CutMechanism::kExponential;
    choice.epsilon = params.epsilon_cut;
    return choice;
  }

  uint64_t index = rng.NextBelow(candidates);
  for (size_t axis = 0; axis < block.dims(); ++axis) {
    const IndexRange r = block.ranges()[axis];
    const uint64_t here = r.extent() - 1;
    if (index < here) {
      choice.axis = axis;
      choice.position = r.lo + static_cast<uint32_t>(index);
      break;
    }
    index -= here;
  }
  choice.mechanism = CutMechanism::kUniform;
  choice.epsilon = 0.0;
  return choice;
}

namespace {

struct BisectionContext {
  const MechanismParams& params;
  const EngineOptions& options;
};

void MergeInto(Partition& into, Partition&& from) {
  into.blocks.insert(into.blocks.end(),
                     std::make_move_iterator(from.blocks.begin()),
                     std::make_move_iterator(from.blocks.end()));
  into.cut_log.insert(into.cut_log.end(),
                      std::make_move_iterator(from.cut_log.begin()),
                      std::make_move_iterator(from.cut_log.end()));
}

absl::Status Bisect(const BisectionContext& ctx, const Block& block,
                    const RandomStream& stream, const std::string& path,
                    int spawn_levels, Partition& out) {
  RandomStream rng = stream;
  bool converged = block.IsAtomic();
  if (!converged) {
    ASSIGN_OR_RETURN(converged,
                     ConvergeTest(block, ctx.params, rng, ctx.options));
  }
  if (converged) {
    ConvergedBlock done;
    done.ranges = block.ranges();
    done.sum = block.sum();
    done.depth = static_cast<uint32_t>(block.depth());
    if (ctx.options.keep_cut_log) done.path = path;
    out.blocks.push_back(std::move(done));
    return absl::OkStatus();
  }

  ASSIGN_OR_RETURN(CutChoice cut, RandomCut(block, ctx.params, rng, ctx.options));
  if (ctx.options.keep_cut_log) {
    out.cut_log.push_back({path, BisectionDepth(block), cut});
  }
  ASSIGN_OR_RETURN(auto children, SplitBlock(block, cut.axis, cut.position));
  const bool keep_path = ctx.options.keep_cut_log;
  const std::string left_path = keep_path ? path + '0' : std::string();
  const std::string right_path = keep_path ? path + '1' : std::string();
  const RandomStream left_stream = stream.Child(0);
  const RandomStream right_stream = stream.Child(1);

  if (spawn_levels > 0) {
    Block left = std::move(children.first);
    auto future = std::async(std::launch::async, [&, left = std::move(left)] {
      Partition part;
      absl::Status s =
          Bisect(ctx, left, left_stream, left_path, spawn_levels - 1, part);
      return std::make_pair(std::move(s), std::move(part));
    });
    Partition right_part;
    absl::Status right_status = Bisect(ctx, children.second, right_stream,
                                       right_path, spawn_levels - 1,
                                       right_part);
    auto [left_status, left_part] = future.get();
    RETURN_IF_ERROR(left_status);
    RETURN_IF_ERROR(right_status);
    MergeInto(out, std::move(left_part));
    MergeInto(out, std::move(right_part));
    return absl::OkStatus();
  }

  // Free each child's cells as soon as its subtree is done.
  {
    Block left = std::move(children.first);
    RETURN_IF_ERROR(Bisect(ctx, left, left_stream, left_path, 0, out));
  }
  Block right = std::move(children.second);
  return Bisect(ctx, right, right_stream, right_path, 0, out);
}

}  // namespace

absl::StatusOr<Partition> RecursiveBisection(const Block& root,
                                             const MechanismParams& params,
                                             const RandomStream& rng,
                                             const EngineOptions& options) {
  BisectionContext ctx{params, options};
  int spawn_levels = 0;
  while ((1 << spawn_levels) < options.threads && spawn_levels < 10) {
    ++spawn_levels;
  }
  Partition partition;
  RETURN_IF_ERROR(Bisect(ctx, root, rng, std::string(), spawn_levels,
                         partition));
  std::sort(partition.blocks.begin(), partition.blocks.end(),
            [](const ConvergedBlock& a, const ConvergedBlock& b) {
              return a.ranges < b.ranges;
            });
  std::sort(partition.cut_log.begin(), partition.cut_log.end(),
            [](const CutRecord& a, const CutRecord& b) {
              return a.path < b.path;
            });
  return partition;
}

absl::StatusOr<PView> Perturb(const Partition& partition, const Schema& schema,
                              const MechanismParams& params, RandomStream& rng,
                              const EngineOptions& options) {
  if (!(params.epsilon_p > 0.0)) {
    return absl::InvalidArgumentError("perturbation budget must be positive");
  }
  const double scale = 1.0 / params.epsilon_p;
  PView view;
  view.schema = schema;
  view.params = params;
  view.blocks.reserve(partition.blocks.size());
  for (const auto& block : partition.blocks) {
    double noise = 0.0;
    if (!options.noise_free) {
      ASSIGN_OR_RETURN(noise, SampleLaplace(scale, rng));
    }
    view.blocks.push_back(
        {block.ranges, static_cast<double>(block.sum) + noise, block.depth});
  }
  return view;
}

nlohmann::json BudgetBreakdown::ToJson() const {
  return {{"epsilon_b", epsilon_b}, {"epsilon_r", epsilon_r},
          {"converge", converge},   {"cut", cut},
          {"epsilon_p", epsilon_p}};
}

BudgetBreakdown BudgetOf(const MechanismParams& params) {
  BudgetBreakdown b;
  b.epsilon_b = params.epsilon_b;
  b.epsilon_r = params.epsilon_r;
  b.converge = params.converge_budget;
  b.cut = params.cut_budget;
  b.epsilon_p = params.epsilon_p;
  return b;
}

absl::StatusOr<BuildResult> BuildView(const CountTensor& tensor,
                                      const Hyperparams& hyperparams,
                                      const BuildOptions& options) {
  ASSIGN_OR_RETURN(MechanismParams params,
                   DeriveParams(hyperparams, tensor.schema().TotalDomainLog2()));
  const RandomStream root_stream(options.seed);
  BuildResult result;
  ASSIGN_OR_RETURN(result.partition,
                   RecursiveBisection(RootBlock(tensor), params,
                                      root_stream.Child(0), options.engine));
  RandomStream perturb_stream = root_stream.Child(1);
  ASSIGN_OR_RETURN(result.view, Perturb(result.partition, tensor.schema(),
                                        params, perturb_stream, options.engine));
  result.view.hyperparams = hyperparams;
  result.view.meta.mechanism = "bisection";
  result.view.meta.seed = options.seed;
  result.view.meta.timestamp = options.timestamp;
  result.budget = BudgetOf(params);
  return result;
}

std::vector<double> CutBudgetPerBlock(const Partition& partition) {
  std::unordered_map<std::string, double> spent;
  for (const auto& record : partition.cut_log) {
    spent[record.path] = record.choice.epsilon;
  }
  std::vector<double> per_block;
  per_block.reserve(partition.blocks.size());
  for (const auto& block : partition.blocks) {
    double total = 0.0;
    for (size_t len = 0; len < block.path.size(); ++len) {
      auto it = spent.find(block.path.substr(0, len));
      if (it != spent.end()) total += it->second;
    }
    per_block.push_back(total);
  }
  return per_block;
}

}  // namespace pview
