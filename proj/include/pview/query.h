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

#ifndef PVIEW_QUERY_H_
#define PVIEW_QUERY_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "pview/block.h"
#include "pview/count_tensor.h"
#include "pview/pview.h"
#include "pview/schema.h"

namespace pview {

// Range counting query: one inclusive index range per attribute.
struct RangeQuery {
  Ranges ranges;

  static RangeQuery FullDomain(const Schema& schema);
  absl::Status Validate(const Schema& schema) const;

  friend bool operator==(const RangeQuery&, const RangeQuery&) = default;
};

// Sum over blocks of |block ∩ query| * noisy_sum / |block|; O(m d).
absl::StatusOr<double> Answer(const PView& view, const RangeQuery& query);

// Number of blocks the query overlaps.
size_t BlocksTouched(const PView& view, const RangeQuery& query);

// True count of records inside the query. Evaluation only.
absl::StatusOr<int64_t> AnswerExact(const CountTensor& tensor,
                                    const RangeQuery& query);

}  // namespace pview

#endif  // PVIEW_QUERY_H_
