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

#ifndef PVIEW_RANGE_EXPR_H_
#define PVIEW_RANGE_EXPR_H_

#include <string>
#include <string_view>
#include <variant>

#include "absl/status/statusor.h"
#include "pview/block.h"
#include "pview/query.h"
#include "pview/schema.h"

namespace pview {

// One end of a range as the user wrote it: a number or a category name.
using RangeValue = std::variant<double, std::string>;

// Maps user bounds on one attribute to an inclusive bin-index range.
//
// With `raw` set, values are in the attribute's natural units: numeric
// values go through the binning, and the upper end is exclusive when it
// falls exactly on an interior bin edge, so [20, 30) style ranges over
// edges ..., 20, 30, ... select exactly the bins between them. A raw range
// with lo == hi selects the bin containing the value. Categorical values
// are category names. Without `raw`, values are bin indices.
//
// Errors: InvalidArgument for values of the wrong shape, OutOfRange for
// values outside the domain, FailedPrecondition when lo > hi.
absl::StatusOr<IndexRange> ResolveRange(const AttributeSpec& attribute,
                                        const RangeValue& lo,
                                        const RangeValue& hi, bool raw);

// Parses comma-separated terms
//
//   attr=lo:hi   raw values (attr=v for a single value)
//   attr@lo:hi   bin indices (attr@i for a single bin)
//
// Omitted attributes span their full domain; an empty expression is the
// full-domain query. Unknown or repeated attributes are InvalidArgument;
// other errors as in ResolveRange.
absl::StatusOr<RangeQuery> ParseRangeExpression(const Schema& schema,
                                                std::string_view expression);

// Inverse rendering with bin indices, e.g. "age@2:3,sex@0:1".
std::string FormatRangeExpression(const Schema& schema,
                                  const RangeQuery& query);

}  // namespace pview

#endif  // PVIEW_RANGE_EXPR_H_
