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

#include "pview/schema.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "pview/status_macros.h"

namespace pview {

using nlohmann::json;

AttributeSpec AttributeSpec::Numeric(std::string name,
                                     std::vector<double> edges) {
  AttributeSpec spec;
  spec.name = std::move(name);
  spec.kind = AttributeKind::kNumeric;
  spec.bin_edges = std::move(edges);
  return spec;
}

AttributeSpec AttributeSpec::EqualWidth(std::string name, int64_t bins,
                                        double min, double max) {
  std::vector<double> edges;
  if (bins > 0) {
    edges.reserve(bins + 1);
    for (int64_t j = 0; j <= bins; ++j) {
      edges.push_back(min + (max - min) * static_cast<double>(j) /
                                static_cast<double>(bins));
    }
    edges.back() = max;
  }
  return Numeric(std::move(name), std::move(edges));
}

AttributeSpec AttributeSpec::Categorical(std::string name,
                                         std::vector<std::string> categories) {
  AttributeSpec spec;
  spec.name = std::move(name);
  spec.kind = AttributeKind::kCategorical;
  spec.categories = std::move(categories);
  return spec;
}

int64_t AttributeSpec::DomainSize() const {
  if (kind == AttributeKind::kNumeric) {
    return bin_edges.empty() ? 0 : static_cast<int64_t>(bin_edges.size()) - 1;
  }
  return static_cast<int64_t>(categories.size());
}

absl::Status AttributeSpec::Validate() const {
  if (name.empty()) return absl::InvalidArgumentError("attribute name is empty");
  if (kind == AttributeKind::kNumeric) {
    if (bin_edges.size() < 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute '", name, "' needs at least one bin"));
    }
    for (size_t j = 0; j < bin_edges.size(); ++j) {
      if (!std::isfinite(bin_edges[j])) {
        return absl::InvalidArgumentError(
            absl::StrCat("attribute '", name, "' has a non-finite bin edge"));
      }
      if (j > 0 && !(bin_edges[j] > bin_edges[j - 1])) {
        return absl::InvalidArgumentError(absl::StrCat(
            "attribute '", name, "' bin edges are not strictly increasing"));
      }
    }
    return absl::OkStatus();
  }
  std::set<std::string_view> seen;
  for (const auto& c : categories) {
    if (!seen.insert(c).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute '", name, "' repeats category '", c, "'"));
    }
  }
  if (categories.empty() && !open_categories) {
    return absl::InvalidArgumentError(
        absl::StrCat("attribute '", name, "' has no categories"));
  }
  return absl::OkStatus();
}

absl::StatusOr<uint32_t> AttributeSpec::BinOf(double value, bool clamp) const {
  if (kind != AttributeKind::kNumeric) {
    return absl::InvalidArgumentError(
        absl::StrCat("attribute '", name, "' is not numeric"));
  }
  if (std::isnan(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NaN value for attribute '", name, "'"));
  }
  const double lo = bin_edges.front();
  const double hi = bin_edges.back();
  if (value < lo || value > hi) {
    if (!clamp) {
      return absl::OutOfRangeError(absl::StrCat(
          "value ", value, " outside [", lo, ", ", hi, "] for attribute '",
          name, "'"));
    }
    value = std::clamp(value, lo, hi);
  }
  auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), value);
  auto bin = static_cast<int64_t>(it - bin_edges.begin()) - 1;
  bin = std::min<int64_t>(bin, DomainSize() - 1);
  return static_cast<uint32_t>(bin);
}

absl::StatusOr<uint32_t> AttributeSpec::CategoryIndex(
    std::string_view value) const {
  for (size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == value) return static_cast<uint32_t>(i);
  }
  return absl::NotFoundError(absl::StrCat("unknown category '", std::string(value),
                                          "' for attribute '", name, "'"));
}

namespace {

absl::StatusOr<AttributeSpec> ParseAttribute(const json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("attribute entry must be an object");
  }
  if (!j.contains("name") || !j["name"].is_string()) {
    return absl::InvalidArgumentError("attribute is missing a string 'name'");
  }
  const std::string name = j["name"].get<std::string>();
  std::string kind = j.value("kind", std::string());
  if (kind.empty()) kind = j.contains("categories") ? "categorical" : "numeric";

  AttributeSpec spec;
  if (kind == "numeric") {
    if (j.contains("bin_edges")) {
      spec = AttributeSpec::Numeric(name,
                                    j["bin_edges"].get<std::vector<double>>());
    } else if (j.contains("bins")) {
      const auto bins = j["bins"].get<int64_t>();
      if (bins < 1) {
        return absl::InvalidArgumentError(
            absl::StrCat("attribute '", name, "' needs bins >= 1"));
      }
      if (!j.contains("min") || !j.contains("max")) {
        return absl::InvalidArgumentError(
            absl::StrCat("attribute '", name, "' needs 'min' and 'max'"));
      }
      spec = AttributeSpec::EqualWidth(name, bins, j["min"].get<double>(),
                                       j["max"].get<double>());
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "numeric attribute '", name, "' needs 'bin_edges' or 'bins'"));
    }
  } else if (kind == "categorical") {
    if (j.contains("categories")) {
      spec = AttributeSpec::Categorical(
          name, j["categories"].get<std::vector<std::string>>());
    } else {
      spec = AttributeSpec::Categorical(name, {});
      spec.open_categories = true;
    }
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("attribute '", name, "' has unknown kind '", kind, "'"));
  }
  RETURN_IF_ERROR(spec.Validate());
  return spec;
}

}  // namespace

absl::StatusOr<Schema> Schema::FromJson(const json& j) {
  try {
    if (!j.is_object() || !j.contains("attributes") ||
        !j["attributes"].is_array()) {
      return absl::InvalidArgumentError(
          "schema must be an object with an 'attributes' array");
    }
    std::vector<AttributeSpec> attributes;
    std::set<std::string> names;
    for (const auto& entry : j["attributes"]) {
      ASSIGN_OR_RETURN(AttributeSpec spec, ParseAttribute(entry));
      if (!names.insert(spec.name).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("duplicate attribute name '", spec.name, "'"));
      }
      attributes.push_back(std::move(spec));
    }
    if (attributes.empty()) {
      return absl::InvalidArgumentError("schema has no attributes");
    }
    return Schema(std::move(attributes));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad schema: ", e.what()));
  }
}

absl::StatusOr<Schema> Schema::FromJsonText(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("schema is not JSON");
  return FromJson(j);
}

absl::StatusOr<Schema> Schema::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJsonText(buffer.str());
}

json Schema::ToJson() const {
  json attrs = json::array();
  for (const auto& a : attributes_) {
    json entry;
    entry["name"] = a.name;
    if (a.kind == AttributeKind::kNumeric) {
      entry["kind"] = "numeric";
      entry["bin_edges"] = a.bin_edges;
    } else {
      entry["kind"] = "categorical";
      entry["categories"] = a.categories;
    }
    attrs.push_back(std::move(entry));
  }
  return json{{"attributes", std::move(attrs)}};
}

std::string Schema::CanonicalJson() const { return ToJson().dump(); }

uint64_t Schema::Hash() const { return Fnv1a64(CanonicalJson()); }

absl::Status Schema::Validate() const {
  if (attributes_.empty()) return absl::InvalidArgumentError("empty schema");
  for (const auto& a : attributes_) {
    RETURN_IF_ERROR(a.Validate());
    if (a.DomainSize() < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute '", a.name, "' has an empty domain"));
    }
  }
  return absl::OkStatus();
}

std::optional<size_t> Schema::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<int64_t> Schema::DomainSizes() const {
  std::vector<int64_t> sizes;
  sizes.reserve(attributes_.size());
  for (const auto& a : attributes_) sizes.push_back(a.DomainSize());
  return sizes;
}

double Schema::TotalDomainLog2() const {
  double total = 0.0;
  for (const auto& a : attributes_) {
    total += std::log2(static_cast<double>(a.DomainSize()));
  }
  return total;
}

std::optional<uint64_t> Schema::TotalDomainExact() const {
  uint64_t total = 1;
  for (const auto& a : attributes_) {
    const auto size = static_cast<uint64_t>(a.DomainSize());
    if (size != 0 && total > UINT64_MAX / size) return std::nullopt;
    total *= size;
  }
  return total;
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace pview
