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

#ifndef PVIEW_SERIALIZATION_H_
#define PVIEW_SERIALIZATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "pview/pview.h"

namespace pview {

inline constexpr uint16_t kViewFormatVersion = 1;

// Binary ".hdpv" layout; integers little-endian, reals IEEE-754 binary64:
//
//   "HDPV"                  4-byte magic
//   u16                     format version
//   varint n, n bytes       schema as canonical JSON
//   u64                     FNV-1a 64 of those schema bytes
//   5 x f64                 epsilon_b, ratio, alpha, beta, gamma
//   10 x f64                epsilon_b, epsilon_r, epsilon_p, theta, kappa,
//                           epsilon_cut, lambda, delta, converge_budget,
//                           cut_budget
//   varint n, n bytes       build metadata as JSON
//   varint m                block count
//   m records               2d varints (lo, hi per attribute), f64 noisy
//                           sum, varint depth
//
// Varints are unsigned LEB128.
std::string SerializeView(const PView& view);

// Errors: Unimplemented for a version mismatch, FailedPrecondition for a
// schema hash mismatch, DataLoss for anything malformed.
absl::StatusOr<PView> DeserializeView(std::string_view bytes);

enum class ViewFormatError { kVersionMismatch, kSchemaHashMismatch, kMalformed };
std::optional<ViewFormatError> FormatErrorKind(const absl::Status& status);

// {"version", "schema", "params", "hyperparams", "meta",
//  "blocks": [{"ranges": [[lo, hi], ...], "noisy_sum", "depth"}]}
nlohmann::json ViewToJson(const PView& view);
absl::StatusOr<PView> ViewFromJson(const nlohmann::json& j);

absl::Status WriteViewFile(const std::string& path, const PView& view);
absl::StatusOr<PView> ReadViewFile(const std::string& path);

}  // namespace pview

#endif  // PVIEW_SERIALIZATION_H_
