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

#ifndef PVIEW_MECHANISMS_H_
#define PVIEW_MECHANISMS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pview/random_stream.h"

namespace pview {

// Inverse CDF of Laplace(0, scale) at u - 1/2, for u in (-1/2, 1/2):
//   -scale * sign(u) * ln(1 - 2|u|).
double LaplaceFromUniform(double u, double scale);

// One Laplace(0, scale) draw; consumes exactly one uniform.
//
// Plain binary64 arithmetic. This is not hardened against floating-point
// attacks on the Laplace mechanism (see Mironov 2012); views built here are
// for utility research, not adversarial deployment.
absl::StatusOr<double> SampleLaplace(double scale, RandomStream& rng);

// Selection probabilities of the exponential mechanism,
//   p_i proportional to exp(epsilon * (q_i - q_max) / (2 * sensitivity)).
// epsilon = 0 gives the uniform distribution.
absl::StatusOr<std::vector<double>> ExponentialProbabilities(
    std::span<const double> qualities, double epsilon, double sensitivity);

// Draws an index from ExponentialProbabilities; consumes one uniform.
absl::StatusOr<size_t> ExponentialChoice(std::span<const double> qualities,
                                         double epsilon, double sensitivity,
                                         RandomStream& rng);

}  // namespace pview

#endif  // PVIEW_MECHANISMS_H_
