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

#include "pview/error_bounds.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "absl/strings/str_cat.h"
#include "pview/aggregation_error.h"
#include "pview/status_macros.h"

namespace pview {
namespace {

constexpr int kGridPoints = 256;
constexpr int kGoldenIterations = 100;
constexpr double kEdgeFraction = 0.999;

bool Active(const BoundTerm& term) { return term.w > 0.0; }

double UpperLimit(std::span<const BoundTerm> terms,
                  const MechanismParams& params) {
  double limit = params.epsilon_p;
  for (const auto& term : terms) {
    if (!Active(term)) continue;
    const double a = term.xi * term.w * params.lambda;
    if (a > 0.0) limit = std::min(limit, 1.0 / a);
  }
  return limit;
}

struct Optimum {
  double t = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

// Maximizes f over (0, limit): a grid scan finds the best bracket, then
// golden-section search refines inside it. Any admissible t gives a valid
// bound, so a missed optimum only loosens the result.
Optimum MaximizeOnOpenInterval(const std::function<double(double)>& f,
                               double limit) {
  const double hi = kEdgeFraction * limit;
  Optimum best;
  int best_j = 0;
  for (int j = 1; j <= kGridPoints; ++j) {
    const double t = hi * j / kGridPoints;
    const double v = f(t);
    if (v > best.value) {
      best = {t, v};
      best_j = j;
    }
  }
  if (best_j == 0) return best;
  double a = hi * (best_j - 1) / kGridPoints;
  double b = hi * std::min(best_j + 1, kGridPoints) / kGridPoints;
  if (a <= 0.0) a = hi * 1e-6 / kGridPoints;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < kGoldenIterations && b - a > 1e-15 * hi; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

}  // namespace

std::optional<double> LowerBoundAt(std::span<const BoundTerm> terms,
                                   const MechanismParams& params, double mu,
                                   double t) {
  if (!(t > 0.0) || !(t < params.epsilon_p)) return std::nullopt;
  double inner = std::log(mu);
  for (const auto& term : terms) {
    if (!Active(term)) continue;
    const double a = term.w / params.epsilon_p * t;
    if (!(a < 1.0)) return std::nullopt;
    inner += std::log1p(-a * a);
  }
  return inner / t;
}

std::optional<double> UpperBoundAt(std::span<const BoundTerm> terms,
                                   const MechanismParams& params, double mu,
                                   double t) {
  if (!(t > 0.0) || !(t < params.epsilon_p)) return std::nullopt;
  double mean = 0.0;
  double inner = std::log(mu);
  for (const auto& term : terms) {
    if (!Active(term)) continue;
    mean += term.xi * term.w *
            (static_cast<double>(term.k) * params.delta + params.theta);
    const double a = term.w / params.epsilon_p * t;
    const double b = term.xi * term.w * params.lambda * t;
    if (!(a < 1.0) || !(b < 1.0)) return std::nullopt;
    inner += std::log1p(-a * a) + std::log1p(-b * b);
  }
  return mean - inner / t;
}

absl::StatusOr<ErrorBound> ErrorBoundsForTerms(std::span<const BoundTerm> terms,
                                               const MechanismParams& params,
                                               double mu) {
  if (!(mu > 0.0 && mu < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mu must lie in (0, 1), got ", mu));
  }
  if (!(params.epsilon_p > 0.0)) {
    return absl::InvalidArgumentError("view has no perturbation budget");
  }
  for (const auto& term : terms) {
    if (!(term.xi > 0.0) || !(term.w >= 0.0 && term.w <= 1.0)) {
      return absl::InvalidArgumentError("bound terms need xi > 0, w in [0, 1]");
    }
  }
  ErrorBound bound;
  bound.mu = mu;

  auto lower = [&](double t) {
    return LowerBoundAt(terms, params, mu, t)
        .value_or(-std::numeric_limits<double>::infinity());
  };
  const Optimum low = MaximizeOnOpenInterval(lower, params.epsilon_p);
  bound.raw_theta_min = low.value;
  bound.theta_min = std::max(0.0, low.value);
  bound.t_min = low.t;

  // Minimizing upper(t) is maximizing its negation.
  auto upper = [&](double t) {
    auto v = UpperBoundAt(terms, params, mu, t);
    return v ? -*v : -std::numeric_limits<double>::infinity();
  };
  const Optimum up = MaximizeOnOpenInterval(upper, UpperLimit(terms, params));
  bound.theta_max = -up.value;
  bound.t_max = up.t;
  return bound;
}

absl::StatusOr<ErrorBound> ErrorBounds(const PView& view,
                                       const RangeQuery& query, double mu,
                                       std::span<const double> xi) {
  RETURN_IF_ERROR(query.Validate(view.schema));
  if (!xi.empty() && xi.size() != 1 && xi.size() != view.blocks.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected 1 or ", view.blocks.size(), " xi values, got ", xi.size()));
  }
  std::vector<BoundTerm> terms;
  std::vector<double> used_xi;
  for (size_t i = 0; i < view.blocks.size(); ++i) {
    const auto& block = view.blocks[i];
    const double overlap = IntersectionSize(query.ranges, block.ranges);
    if (overlap <= 0.0) continue;
    BoundTerm term;
    term.w = overlap / block.size();
    term.xi = xi.empty() ? 1.0 : (xi.size() == 1 ? xi[0] : xi[i]);
    term.k = static_cast<int>(block.depth) + 1;
    terms.push_back(term);
    used_xi.push_back(term.xi);
  }
  ASSIGN_OR_RETURN(ErrorBound bound, ErrorBoundsForTerms(terms, view.params, mu));
  bound.xi = std::move(used_xi);
  return bound;
}

namespace {

double AeDensity(const Block& block) {
  return AggregationError(block) / block.size();
}

// Sub-block AE density without materializing the sub-block.
double SubBlockAeDensity(const Block& block, const Ranges& sub,
                         std::vector<int64_t>& scratch) {
  scratch.clear();
  const CellList& cells = block.cells();
  for (size_t i = 0; i < cells.size(); ++i) {
    bool inside = true;
    for (size_t axis = 0; axis < sub.size() && inside; ++axis) {
      inside = sub[axis].Contains(cells.coord(i, axis));
    }
    if (inside) scratch.push_back(cells.count(i));
  }
  const double size = RangesSize(sub);
  return AggregationErrorOf(scratch, size) / size;
}

}  // namespace

double SubBlockCount(const Block& block) {
  double count = 1.0;
  for (const auto& r : block.ranges()) {
    const auto e = static_cast<double>(r.extent());
    count *= e * (e + 1.0) / 2.0;
  }
  return count;
}

double ExactXi(const Block& block) {
  const double base = AeDensity(block);
  if (!(base > 0.0)) return 1.0;
  const Ranges& outer = block.ranges();
  Ranges sub = outer;
  for (auto& r : sub) r.hi = r.lo;
  std::vector<int64_t> scratch;
  double best = 0.0;
  while (true) {
    best = std::max(best, SubBlockAeDensity(block, sub, scratch));
    // Odometer over (lo, hi) pairs, axis 0 fastest.
    size_t axis = 0;
    for (; axis < sub.size(); ++axis) {
      if (sub[axis].hi < outer[axis].hi) {
        ++sub[axis].hi;
        break;
      }
      if (sub[axis].lo < outer[axis].hi) {
        ++sub[axis].lo;
        sub[axis].hi = sub[axis].lo;
        break;
      }
      sub[axis].lo = sub[axis].hi = outer[axis].lo;
    }
    if (axis == sub.size()) break;
  }
  return best / base;
}

double EstimateXi(const Block& block, uint64_t samples, RandomStream& rng) {
  if (samples == 0 ||
      SubBlockCount(block) <= static_cast<double>(kExhaustiveXiLimit)) {
    return ExactXi(block);
  }
  return SampledXi(block, samples, rng);
}

double SampledXi(const Block& block, uint64_t samples, RandomStream& rng) {
  const double base = AeDensity(block);
  if (!(base > 0.0)) return 1.0;
  std::vector<int64_t> scratch;
  Ranges sub = block.ranges();
  double best = 0.0;
  for (uint64_t s = 0; s < samples; ++s) {
    for (size_t axis = 0; axis < sub.size(); ++axis) {
      const IndexRange r = block.ranges()[axis];
      const uint64_t e = r.extent();
      // Uniform over the e (e + 1) / 2 pairs lo <= hi.
      uint64_t index = rng.NextBelow(e * (e + 1) / 2);
      uint64_t lo = 0;
      while (index >= e - lo) {
        index -= e - lo;
        ++lo;
      }
      sub[axis].lo = r.lo + static_cast<uint32_t>(lo);
      sub[axis].hi = sub[axis].lo + static_cast<uint32_t>(index);
    }
    best = std::max(best, SubBlockAeDensity(block, sub, scratch));
  }
  return best / base;
}

}  // namespace pview
