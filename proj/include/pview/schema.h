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

#ifndef PVIEW_SCHEMA_H_
#define PVIEW_SCHEMA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace pview {

enum class AttributeKind { kNumeric, kCategorical };

// One binned or ordinally encoded attribute. Numeric values map to bins by
// half-open intervals [edge_j, edge_{j+1}); the final bin is closed on the
// right. Categorical values map to their position in `categories`.
struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  std::vector<double> bin_edges;
  std::vector<std::string> categories;
  // Categorical only: the category list is grown in order of first
  // appearance while loading data.
  bool open_categories = false;

  static AttributeSpec Numeric(std::string name, std::vector<double> edges);
  static AttributeSpec EqualWidth(std::string name, int64_t bins, double min,
                                  double max);
  static AttributeSpec Categorical(std::string name,
                                   std::vector<std::string> categories);

  int64_t DomainSize() const;
  absl::Status Validate() const;

  // Bin index of a numeric value. Values outside [front, back] are an error
  // unless `clamp` is set.
  absl::StatusOr<uint32_t> BinOf(double value, bool clamp = false) const;
  absl::StatusOr<uint32_t> CategoryIndex(std::string_view value) const;

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;
};

class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttributeSpec> attributes)
      : attributes_(std::move(attributes)) {}

  // Parses {"attributes": [{"name", "kind", "bin_edges" | "categories" |
  // {"bins", "min", "max"}}]}.
  static absl::StatusOr<Schema> FromJson(const nlohmann::json& json);
  static absl::StatusOr<Schema> FromJsonText(std::string_view text);
  static absl::StatusOr<Schema> FromFile(const std::string& path);

  nlohmann::json ToJson() const;
  // Compact, key-ordered dump used for hashing and the binary view header.
  std::string CanonicalJson() const;
  uint64_t Hash() const;

  // Every attribute must have a closed, non-empty domain.
  absl::Status Validate() const;

  size_t dims() const { return attributes_.size(); }
  const std::vector<AttributeSpec>& attributes() const { return attributes_; }
  std::vector<AttributeSpec>& mutable_attributes() { return attributes_; }
  const AttributeSpec& attribute(size_t i) const { return attributes_[i]; }
  std::optional<size_t> IndexOf(std::string_view name) const;

  std::vector<int64_t> DomainSizes() const;
  // log2 of the product of domain sizes; finite for domains far beyond 2^64.
  double TotalDomainLog2() const;
  // Exact product when it fits in 64 bits.
  std::optional<uint64_t> TotalDomainExact() const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<AttributeSpec> attributes_;
};

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes);

}  // namespace pview

#endif  // PVIEW_SCHEMA_H_
