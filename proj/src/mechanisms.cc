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

#include "pview/mechanisms.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace pview {

double LaplaceFromUniform(double u, double scale) {
  if (u == 0.0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
  return u > 0 ? magnitude : -magnitude;
}

absl::StatusOr<double> SampleLaplace(double scale, RandomStream& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be positive and finite, got ", scale));
  }
  return LaplaceFromUniform(rng.NextOpenUniform() - 0.5, scale);
}

absl::StatusOr<std::vector<double>> ExponentialProbabilities(
    std::span<const double> qualities, double epsilon, double sensitivity) {
  if (qualities.empty()) {
    return absl::InvalidArgumentError("no candidates to choose from");
  }
  if (!(sensitivity > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be positive, got ", sensitivity));
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be non-negative, got ", epsilon));
  }
  double best = -INFINITY;
  for (double q : qualities) {
    if (std::isnan(q)) return absl::InvalidArgumentError("NaN quality");
    best = std::max(best, q);
  }
  std::vector<double> weights(qualities.size());
  double total = 0.0;
  for (size_t i = 0; i < qualities.size(); ++i) {
    weights[i] = std::exp(epsilon * (qualities[i] - best) / (2.0 * sensitivity));
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return weights;
}

absl::StatusOr<size_t> ExponentialChoice(std::span<const double> qualities,
                                         double epsilon, double sensitivity,
                                         RandomStream& rng) {
  auto probabilities = ExponentialProbabilities(qualities, epsilon, sensitivity);
  if (!probabilities.ok()) return probabilities.status();
  const double u = rng.NextUniform();
  double cumulative = 0.0;
  for (size_t i = 0; i < probabilities->size(); ++i) {
    cumulative += (*probabilities)[i];
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum a hair below 1.
  for (size_t i = probabilities->size(); i-- > 0;) {
    if ((*probabilities)[i] > 0.0) return i;
  }
  return probabilities->size() - 1;
}

}  // namespace pview
