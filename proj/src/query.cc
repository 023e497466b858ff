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

#include "pview/query.h"

#include "absl/strings/str_cat.h"
#include "pview/status_macros.h"

namespace pview {

RangeQuery RangeQuery::FullDomain(const Schema& schema) {
  RangeQuery q;
  for (int64_t size : schema.DomainSizes()) {
    q.ranges.push_back({0, static_cast<uint32_t>(size - 1)});
  }
  return q;
}

absl::Status RangeQuery::Validate(const Schema& schema) const {
  if (ranges.size() != schema.dims()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "query has ", ranges.size(), " ranges for ", schema.dims(),
        " attributes"));
  }
  for (size_t i = 0; i < ranges.size(); ++i) {
    const auto& a = schema.attribute(i);
    if (ranges[i].lo > ranges[i].hi) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", a.name, "': lo ", ranges[i].lo, " > hi ",
          ranges[i].hi));
    }
    if (static_cast<int64_t>(ranges[i].hi) >= a.DomainSize()) {
      return absl::OutOfRangeError(absl::StrCat(
          "attribute '", a.name, "': range [", ranges[i].lo, ", ",
          ranges[i].hi, "] leaves domain [0, ", a.DomainSize() - 1, "]"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> Answer(const PView& view, const RangeQuery& query) {
  RETURN_IF_ERROR(query.Validate(view.schema));
  double answer = 0.0;
  for (const auto& block : view.blocks) {
    const double overlap = IntersectionSize(query.ranges, block.ranges);
    if (overlap > 0.0) answer += overlap * block.noisy_sum / block.size();
  }
  return answer;
}

size_t BlocksTouched(const PView& view, const RangeQuery& query) {
  size_t touched = 0;
  for (const auto& block : view.blocks) {
    if (IntersectionSize(query.ranges, block.ranges) > 0.0) ++touched;
  }
  return touched;
}

absl::StatusOr<int64_t> AnswerExact(const CountTensor& tensor,
                                    const RangeQuery& query) {
  RETURN_IF_ERROR(query.Validate(tensor.schema()));
  const CellList& cells = tensor.cells();
  int64_t total = 0;
  for (size_t i = 0; i < cells.size(); ++i) {
    bool inside = true;
    for (size_t axis = 0; axis < query.ranges.size() && inside; ++axis) {
      inside = query.ranges[axis].Contains(cells.coord(i, axis));
    }
    if (inside) total += cells.count(i);
  }
  return total;
}

}  // namespace pview
