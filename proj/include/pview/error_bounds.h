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

#ifndef PVIEW_ERROR_BOUNDS_H_
#define PVIEW_ERROR_BOUNDS_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pview/block.h"
#include "pview/params.h"
#include "pview/pview.h"
#include "pview/query.h"
#include "pview/random_stream.h"

namespace pview {

// What one block contributes to a query's error bound.
struct BoundTerm {
  double w = 0.0;   // |block ∩ query| / |block|
  double xi = 1.0;  // the block is xi-uniformly scattered
  int k = 1;        // bisection depth of the block (root = 1)
};

// Chernoff-style bounds on |q(X) - q(view)| holding with probability at
// least 1 - mu each:
//
//   lower(t) = (1/t) (ln mu + sum_i ln(1 - (w_i/eps_p)^2 t^2))
//   upper(t) = sum_i xi_i w_i (k_i delta + theta)
//              - (1/t) (ln mu + sum_i [ln(1 - (w_i/eps_p)^2 t^2)
//                                      + ln(1 - (xi_i w_i lambda)^2 t^2)])
//
// theta_min is the best lower(t) clamped at 0; theta_max is the smallest
// upper(t). Admissible t: 0 < t < eps_p, and for the upper bound also
// t < 1 / max_i(xi_i w_i lambda). Blocks with w_i = 0 drop out.
struct ErrorBound {
  double theta_min = 0.0;
  double theta_max = 0.0;
  double raw_theta_min = 0.0;  // before clamping at 0
  double mu = 0.0;
  double t_min = 0.0;  // t behind theta_min
  double t_max = 0.0;  // t behind theta_max
  std::vector<double> xi;
};

// Evaluates the lower/upper expressions at a fixed t; nullopt when t is not
// admissible.
std::optional<double> LowerBoundAt(std::span<const BoundTerm> terms,
                                   const MechanismParams& params, double mu,
                                   double t);
std::optional<double> UpperBoundAt(std::span<const BoundTerm> terms,
                                   const MechanismParams& params, double mu,
                                   double t);

absl::StatusOr<ErrorBound> ErrorBoundsForTerms(std::span<const BoundTerm> terms,
                                               const MechanismParams& params,
                                               double mu);

// `xi` may be empty (every xi_i = 1), a single shared value, or one value
// per view block.
absl::StatusOr<ErrorBound> ErrorBounds(const PView& view,
                                       const RangeQuery& query, double mu,
                                       std::span<const double> xi = {});

// Smallest xi for which `block` is xi-uniformly scattered: the maximum over
// contiguous sub-blocks B' of (AE(B')/|B'|) / (AE(B)/|B|). Returns 1 when
// AE(B) = 0. Every sub-block is visited when there are at most
// kExhaustiveXiLimit of them or `samples` is 0; otherwise `samples` random
// sub-blocks are drawn, which can only under-estimate the exact value.
// Needs raw cells, so it is for offline evaluation on public data only.
inline constexpr uint64_t kExhaustiveXiLimit = 10000;
double EstimateXi(const Block& block, uint64_t samples, RandomStream& rng);
double ExactXi(const Block& block);
double SampledXi(const Block& block, uint64_t samples, RandomStream& rng);

// Number of contiguous sub-blocks: prod_i extent_i (extent_i + 1) / 2.
double SubBlockCount(const Block& block);

}  // namespace pview

#endif  // PVIEW_ERROR_BOUNDS_H_
