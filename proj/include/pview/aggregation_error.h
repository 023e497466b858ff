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

#ifndef PVIEW_AGGREGATION_ERROR_H_
#define PVIEW_AGGREGATION_ERROR_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pview/block.h"
#include "pview/params.h"

namespace pview {

// Sum of |x - S/size| over every cell of a block of `size` cells whose
// nonzero counts are `counts`; the (size - nonzero) implicit zeros each
// contribute the mean.
double AggregationErrorOf(std::span<const int64_t> counts, double size);

double AggregationError(const Block& block);

// Depth used by the converge test and the cut budget: the root is at 1.
inline int BisectionDepth(const Block& block) { return block.depth() + 1; }

// max(theta + 2 - delta, ae - k * delta).
double BiasedAggregationError(double ae, int k, const MechanismParams& params);
double BiasedAggregationError(const Block& block,
                              const MechanismParams& params);

// L1 sensitivity of the aggregation error of a block of `size` cells:
// 2 (1 - 1/size).
absl::StatusOr<double> AeSensitivity(double size);
// Supremum of AeSensitivity over all sizes.
inline constexpr double kAeSensitivityBound = 2.0;

struct CutCandidate {
  size_t axis = 0;
  uint32_t position = 0;  // left child ends here
  double quality = 0.0;   // -(AE(left) + AE(right))
};

// -(AE(left) + AE(right)) for one cut.
absl::StatusOr<double> Quality(const Block& block, size_t axis,
                               uint32_t position);

// Every valid cut of `block`, axis-major with ascending positions. One sweep
// per axis keeps running count/sum statistics of the left child in a
// Fenwick tree over the distinct cell values, so each candidate costs
// O(log cells) instead of a pass over the block.
std::vector<CutCandidate> CutQualities(const Block& block);

}  // namespace pview

#endif  // PVIEW_AGGREGATION_ERROR_H_
