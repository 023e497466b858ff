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

#ifndef PVIEW_WORKLOAD_H_
#define PVIEW_WORKLOAD_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pview/query.h"
#include "pview/random_stream.h"
#include "pview/schema.h"

namespace pview {

struct Workload {
  std::string name;
  std::vector<RangeQuery> queries;
};

// Every k-subset of attributes, one query per combination of single bins on
// those attributes (full range elsewhere). With `limit` set and exceeded,
// `limit` distinct queries are drawn uniformly from the enumeration using
// `rng`.
absl::StatusOr<Workload> GenKwayMarginal(
    const Schema& schema, int k, std::optional<uint64_t> limit = std::nullopt,
    RandomStream* rng = nullptr);

// Every k-subset with every contiguous [s, e] per chosen attribute, capped
// at `limit` (which must be positive) by uniform subsampling.
absl::StatusOr<Workload> GenKwayRange(const Schema& schema, int k,
                                      uint64_t limit, RandomStream& rng);

// Prefix ranges [0, e] on every chosen attribute, all e combinations.
absl::StatusOr<Workload> GenPrefix(const Schema& schema, int k,
                                   std::optional<uint64_t> limit = std::nullopt,
                                   RandomStream* rng = nullptr);

// `count` queries, each on a uniformly random k-subset of attributes with a
// uniformly random [s, e] (s <= e) per chosen attribute.
absl::StatusOr<Workload> GenRandomRange(const Schema& schema, int k,
                                        uint64_t count, RandomStream& rng);

// Uniform draw over the d (d + 1) / 2 ranges [s, e] of a domain of size d.
IndexRange RandomInterval(uint64_t domain, RandomStream& rng);

}  // namespace pview

#endif  // PVIEW_WORKLOAD_H_
