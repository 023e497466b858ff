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

#ifndef PVIEW_PVIEW_H_
#define PVIEW_PVIEW_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "json.hpp"
#include "pview/block.h"
#include "pview/params.h"
#include "pview/schema.h"

namespace pview {

inline constexpr char kEngineVersion[] = "1.0.0";

// A released block: its ranges and its noisy sum. Depth counts cuts from
// the root and is public.
struct ViewBlock {
  Ranges ranges;
  double noisy_sum = 0.0;
  uint32_t depth = 0;

  double size() const { return RangesSize(ranges); }

  friend bool operator==(const ViewBlock&, const ViewBlock&) = default;
};

struct BuildMeta {
  std::string mechanism = "bisection";  // or "identity"
  std::string engine_version = kEngineVersion;
  std::optional<uint64_t> seed;
  // Omitted unless requested so that replayed builds stay byte-identical.
  std::optional<std::string> timestamp;

  nlohmann::json ToJson() const;
  static BuildMeta FromJson(const nlohmann::json& j);

  friend bool operator==(const BuildMeta&, const BuildMeta&) = default;
};

// The privacy-preserving materialized view: disjoint blocks covering the
// whole domain, each with a noisy sum, plus what the error bounds need.
struct PView {
  Schema schema;
  Hyperparams hyperparams;
  MechanismParams params;
  BuildMeta meta;
  std::vector<ViewBlock> blocks;

  size_t block_count() const { return blocks.size(); }
  double TotalNoisyCount() const;

  // Ranges inside the schema's domains and block sizes adding up to the
  // total domain (when it fits 64 bits).
  absl::Status Validate() const;

  friend bool operator==(const PView&, const PView&) = default;
};

// Orders blocks lexicographically by ranges.
void SortBlocksCanonically(std::vector<ViewBlock>& blocks);

}  // namespace pview

#endif  // PVIEW_PVIEW_H_
