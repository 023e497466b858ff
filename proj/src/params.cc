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

#include "pview/params.h"

#include <cmath>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"

namespace pview {
namespace {

// Splits `total` into (part, rest) with part close to `wanted` and
// part + rest == total in floating point, so budget ledgers add up without
// rounding drift. Some parts have no exact complement; those are nudged
// toward zero by an ulp, which only under-spends.
std::pair<double, double> SplitExactly(double total, double wanted) {
  double part = wanted;
  for (int attempt = 0; attempt < 16; ++attempt) {
    double rest = total - part;
    for (int i = 0; i < 8; ++i) {
      if (part + rest == total) return {part, rest};
      rest = std::nextafter(rest, part + rest < total ? HUGE_VAL : -HUGE_VAL);
    }
    part = std::nextafter(part, 0.0);
  }
  return {wanted, total - wanted};
}

}  // namespace

absl::Status Hyperparams::Validate() const {
  if (!(epsilon_b > 0.0) || !std::isfinite(epsilon_b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", epsilon_b));
  }
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ratio must lie in [0, 1], got ", ratio));
  }
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must exceed 1 (lambda diverges), got ", alpha));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must be positive, got ", beta));
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must lie in [0, 1], got ", gamma));
  }
  return absl::OkStatus();
}

absl::StatusOr<MechanismParams> DeriveParams(const Hyperparams& hp,
                                             double total_domain_log2) {
  if (auto s = hp.Validate(); !s.ok()) return s;
  if (!(total_domain_log2 > 0.0) || !std::isfinite(total_domain_log2)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "total domain must exceed one cell (log2 = ", total_domain_log2, ")"));
  }
  MechanismParams p;
  p.epsilon_b = hp.epsilon_b;
  std::tie(p.epsilon_r, p.epsilon_p) =
      SplitExactly(hp.epsilon_b, hp.epsilon_b * hp.ratio);
  if (!(p.epsilon_p > 0.0)) {
    return absl::InvalidArgumentError(
        "perturbation budget is zero (ratio = 1); threshold 1/epsilon_p "
        "is undefined");
  }
  std::tie(p.converge_budget, p.cut_budget) =
      SplitExactly(p.epsilon_r, hp.gamma * p.epsilon_r);
  if (!(p.converge_budget > 0.0)) {
    return absl::InvalidArgumentError(
        "converge budget gamma * epsilon_r is zero; lambda diverges");
  }
  p.theta = 1.0 / p.epsilon_p;
  p.kappa = hp.beta * total_domain_log2;
  p.epsilon_cut = (1.0 - hp.gamma) * p.epsilon_r / p.kappa;
  p.lambda = ((3.0 * hp.alpha - 2.0) / (hp.alpha - 1.0)) *
             (2.0 / p.converge_budget);
  p.delta = p.lambda * std::log(hp.alpha);
  return p;
}

MechanismParams IdentityParams(double epsilon) {
  MechanismParams p;
  p.epsilon_b = epsilon;
  p.epsilon_p = epsilon;
  return p;
}

nlohmann::json MechanismParams::ToJson() const {
  return {{"epsilon_b", epsilon_b},     {"epsilon_r", epsilon_r},
          {"epsilon_p", epsilon_p},     {"theta", theta},
          {"kappa", kappa},             {"epsilon_cut", epsilon_cut},
          {"lambda", lambda},           {"delta", delta},
          {"converge_budget", converge_budget},
          {"cut_budget", cut_budget}};
}

absl::StatusOr<MechanismParams> MechanismParams::FromJson(
    const nlohmann::json& j) {
  try {
    MechanismParams p;
    p.epsilon_b = j.at("epsilon_b").get<double>();
    p.epsilon_r = j.at("epsilon_r").get<double>();
    p.epsilon_p = j.at("epsilon_p").get<double>();
    p.theta = j.at("theta").get<double>();
    p.kappa = j.at("kappa").get<double>();
    p.epsilon_cut = j.at("epsilon_cut").get<double>();
    p.lambda = j.at("lambda").get<double>();
    p.delta = j.at("delta").get<double>();
    p.converge_budget = j.value("converge_budget", 0.0);
    p.cut_budget = j.value("cut_budget", 0.0);
    return p;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad params: ", e.what()));
  }
}

}  // namespace pview
