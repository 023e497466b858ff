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

#include "pview/aggregation_error.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace pview {

double AggregationErrorOf(std::span<const int64_t> counts, double size) {
  if (!(size > 0.0)) return 0.0;
  int64_t sum = 0;
  for (int64_t c : counts) sum += c;
  const double mean = static_cast<double>(sum) / size;
  double ae = 0.0;
  for (int64_t c : counts) ae += std::fabs(static_cast<double>(c) - mean);
  ae += (size - static_cast<double>(counts.size())) * mean;
  return ae;
}

double AggregationError(const Block& block) {
  return AggregationErrorOf(block.cells().counts(), block.size());
}

double BiasedAggregationError(double ae, int k, const MechanismParams& params) {
  return std::max(params.theta + 2.0 - params.delta,
                  ae - static_cast<double>(k) * params.delta);
}

double BiasedAggregationError(const Block& block,
                              const MechanismParams& params) {
  return BiasedAggregationError(AggregationError(block), BisectionDepth(block),
                                params);
}

absl::StatusOr<double> AeSensitivity(double size) {
  if (!(size >= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("block size must be at least 1, got ", size));
  }
  return 2.0 * (1.0 - 1.0 / size);
}

absl::StatusOr<double> Quality(const Block& block, size_t axis,
                               uint32_t position) {
  auto children = SplitBlock(block, axis, position);
  if (!children.ok()) return children.status();
  return -(AggregationError(children->first) +
           AggregationError(children->second));
}

namespace {

class Fenwick {
 public:
  explicit Fenwick(size_t n) : count_(n + 1, 0), sum_(n + 1, 0) {}

  void Add(size_t index, int64_t value) {
    for (size_t i = index + 1; i < count_.size(); i += i & (~i + 1)) {
      count_[i] += 1;
      sum_[i] += value;
    }
  }
  // Count and sum over ranks [0, n).
  std::pair<int64_t, int64_t> Prefix(size_t n) const {
    int64_t c = 0;
    int64_t s = 0;
    for (size_t i = n; i > 0; i -= i & (~i + 1)) {
      c += count_[i];
      s += sum_[i];
    }
    return {c, s};
  }

 private:
  std::vector<int64_t> count_;
  std::vector<int64_t> sum_;
};

// AE of one side given the side's statistics and, for its mean, how many of
// its nonzero values are <= mean and their sum.
double SideAe(double size, int64_t nonzero, int64_t sum, int64_t count_le,
              int64_t sum_le) {
  if (!(size > 0.0)) return 0.0;
  const double mean = static_cast<double>(sum) / size;
  const double below =
      mean * static_cast<double>(count_le) - static_cast<double>(sum_le);
  const double above = static_cast<double>(sum - sum_le) -
                       mean * static_cast<double>(nonzero - count_le);
  return below + above + (size - static_cast<double>(nonzero)) * mean;
}

}  // namespace

std::vector<CutCandidate> CutQualities(const Block& block) {
  std::vector<CutCandidate> out;
  out.reserve(block.CutCandidateCount());
  const CellList& cells = block.cells();
  const size_t n = cells.size();

  // Distinct values and each cell's rank among them.
  std::vector<int64_t> values(cells.counts());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<size_t> rank(n);
  for (size_t i = 0; i < n; ++i) {
    rank[i] = static_cast<size_t>(
        std::lower_bound(values.begin(), values.end(), cells.count(i)) -
        values.begin());
  }
  // Whole-block prefix statistics by rank.
  std::vector<int64_t> all_count(values.size() + 1, 0);
  std::vector<int64_t> all_sum(values.size() + 1, 0);
  for (size_t i = 0; i < n; ++i) {
    all_count[rank[i] + 1] += 1;
    all_sum[rank[i] + 1] += cells.count(i);
  }
  for (size_t r = 0; r < values.size(); ++r) {
    all_count[r + 1] += all_count[r];
    all_sum[r + 1] += all_sum[r];
  }
  const int64_t total_sum = block.sum();
  const auto total_nonzero = static_cast<int64_t>(n);
  auto ranks_le = [&](double mean) {
    return static_cast<size_t>(
        std::upper_bound(values.begin(), values.end(), mean,
                         [](double m, int64_t v) {
                           return m < static_cast<double>(v);
                         }) -
        values.begin());
  };

  std::vector<size_t> order(n);
  for (size_t axis = 0; axis < block.dims(); ++axis) {
    const IndexRange range = block.ranges()[axis];
    if (range.extent() < 2) continue;
    const double slice = block.size() / static_cast<double>(range.extent());

    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return cells.coord(a, axis) < cells.coord(b, axis);
    });

    Fenwick left(values.size());
    int64_t left_sum = 0;
    int64_t left_nonzero = 0;
    size_t next = 0;
    for (uint32_t p = range.lo; p < range.hi; ++p) {
      while (next < n && cells.coord(order[next], axis) <= p) {
        const size_t cell = order[next++];
        left.Add(rank[cell], cells.count(cell));
        left_sum += cells.count(cell);
        ++left_nonzero;
      }
      const double left_size = slice * static_cast<double>(p - range.lo + 1);
      const double right_size = slice * static_cast<double>(range.hi - p);
      const int64_t right_sum = total_sum - left_sum;
      const int64_t right_nonzero = total_nonzero - left_nonzero;

      const double left_mean = static_cast<double>(left_sum) / left_size;
      const size_t lr = ranks_le(left_mean);
      const auto [lc, ls] = left.Prefix(lr);
      const double left_ae = SideAe(left_size, left_nonzero, left_sum, lc, ls);

      const double right_mean = static_cast<double>(right_sum) / right_size;
      const size_t rr = ranks_le(right_mean);
      const auto [lc_r, ls_r] = left.Prefix(rr);
      const double right_ae =
          SideAe(right_size, right_nonzero, right_sum, all_count[rr] - lc_r,
                 all_sum[rr] - ls_r);

      out.push_back({axis, p, -(left_ae + right_ae)});
    }
  }
  return out;
}

}  // namespace pview
