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

#include "pview/pview.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace pview {

nlohmann::json BuildMeta::ToJson() const {
  nlohmann::json j{{"mechanism", mechanism},
                   {"engine_version", engine_version}};
  if (seed) j["seed"] = *seed;
  if (timestamp) j["timestamp"] = *timestamp;
  return j;
}

BuildMeta BuildMeta::FromJson(const nlohmann::json& j) {
  BuildMeta meta;
  meta.mechanism = j.value("mechanism", std::string("bisection"));
  meta.engine_version = j.value("engine_version", std::string());
  if (j.contains("seed")) meta.seed = j["seed"].get<uint64_t>();
  if (j.contains("timestamp")) meta.timestamp = j["timestamp"].get<std::string>();
  return meta;
}

double PView::TotalNoisyCount() const {
  double total = 0.0;
  for (const auto& b : blocks) total += b.noisy_sum;
  return total;
}

absl::Status PView::Validate() const {
  if (blocks.empty()) return absl::FailedPreconditionError("view has no blocks");
  const auto domains = schema.DomainSizes();
  uint64_t covered = 0;
  bool overflow = false;
  for (size_t b = 0; b < blocks.size(); ++b) {
    const auto& ranges = blocks[b].ranges;
    if (ranges.size() != domains.size()) {
      return absl::DataLossError(
          absl::StrCat("block ", b, " has wrong dimensionality"));
    }
    for (size_t i = 0; i < ranges.size(); ++i) {
      if (ranges[i].lo > ranges[i].hi ||
          static_cast<int64_t>(ranges[i].hi) >= domains[i]) {
        return absl::DataLossError(absl::StrCat(
            "block ", b, " leaves the domain of attribute '",
            schema.attribute(i).name, "'"));
      }
    }
    auto size = RangesSizeExact(ranges);
    if (!size || covered > UINT64_MAX - *size) {
      overflow = true;
    } else {
      covered += *size;
    }
  }
  auto total = schema.TotalDomainExact();
  if (total && !overflow && covered != *total) {
    return absl::DataLossError(absl::StrCat(
        "blocks cover ", covered, " cells but the domain has ", *total));
  }
  return absl::OkStatus();
}

void SortBlocksCanonically(std::vector<ViewBlock>& blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](const ViewBlock& a, const ViewBlock& b) {
              return a.ranges < b.ranges;
            });
}

}  // namespace pview
