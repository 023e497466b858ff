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

#ifndef PVIEW_PARAMS_H_
#define PVIEW_PARAMS_H_

#include "absl/status/statusor.h"
#include "json.hpp"

namespace pview {

// User-facing knobs of the bisection build.
struct Hyperparams {
  double epsilon_b = 1.0;  // total privacy budget
  double ratio = 0.9;      // share of epsilon_b spent on the bisection
  double alpha = 1.6;      // exp(delta / lambda)
  double beta = 1.2;       // kappa = beta * log2(total domain)
  double gamma = 0.9;      // share of the bisection budget for converge tests

  absl::Status Validate() const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Quantities derived from Hyperparams and the total domain size.
//
// epsilon_r + epsilon_p == epsilon_b; theta = 1 / epsilon_p;
// kappa = beta * log2(n); epsilon_cut = (1 - gamma) * epsilon_r / kappa;
// lambda = ((3 alpha - 2) / (alpha - 1)) * (2 / (gamma epsilon_r));
// delta = lambda * ln(alpha).
struct MechanismParams {
  double epsilon_b = 0.0;
  double epsilon_r = 0.0;
  double epsilon_p = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double epsilon_cut = 0.0;
  double lambda = 0.0;
  double delta = 0.0;

  // Budget for the converge tests: gamma * epsilon_r.
  double converge_budget = 0.0;
  // Budget for the cuts: epsilon_r - converge_budget.
  double cut_budget = 0.0;

  nlohmann::json ToJson() const;
  static absl::StatusOr<MechanismParams> FromJson(const nlohmann::json& j);

  friend bool operator==(const MechanismParams&,
                         const MechanismParams&) = default;
};

absl::StatusOr<MechanismParams> DeriveParams(const Hyperparams& hp,
                                             double total_domain_log2);

// Parameters of a view built by adding Laplace(1/epsilon) to every cell.
// Bisection-only terms (theta, delta, lambda, kappa) are zero, so error
// bounds reduce to the perturbation term.
MechanismParams IdentityParams(double epsilon);

}  // namespace pview

#endif  // PVIEW_PARAMS_H_
