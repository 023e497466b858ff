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

#ifndef PVIEW_COUNT_TENSOR_H_
#define PVIEW_COUNT_TENSOR_H_

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pview/schema.h"

namespace pview {

using Coord = std::vector<uint32_t>;

// Nonzero cells stored as a flat coordinate array (dims entries per cell)
// plus one count per cell.
class CellList {
 public:
  CellList() = default;
  explicit CellList(size_t dims) : dims_(dims) {}

  size_t dims() const { return dims_; }
  size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  std::span<const uint32_t> coord(size_t i) const {
    return {coords_.data() + i * dims_, dims_};
  }
  uint32_t coord(size_t i, size_t axis) const {
    return coords_[i * dims_ + axis];
  }
  int64_t count(size_t i) const { return counts_[i]; }
  const std::vector<int64_t>& counts() const { return counts_; }

  void Reserve(size_t n) {
    coords_.reserve(n * dims_);
    counts_.reserve(n);
  }
  void Append(std::span<const uint32_t> coord, int64_t count) {
    coords_.insert(coords_.end(), coord.begin(), coord.end());
    counts_.push_back(count);
  }
  void AppendFrom(const CellList& other, size_t i) {
    Append(other.coord(i), other.count(i));
  }

 private:
  size_t dims_ = 0;
  std::vector<uint32_t> coords_;
  std::vector<int64_t> counts_;
};

// Sparse d-mode tensor of record counts. Cells are strictly positive and
// sorted lexicographically by coordinate; zeros are implicit.
class CountTensor {
 public:
  CountTensor() = default;

  // Merges duplicate coordinates and drops non-positive totals. Every
  // coordinate must lie inside the schema's domains.
  static absl::StatusOr<CountTensor> FromCells(
      Schema schema, std::vector<std::pair<Coord, int64_t>> cells);
  // One record per coordinate row.
  static absl::StatusOr<CountTensor> FromRecords(
      Schema schema, const std::vector<Coord>& records);

  const Schema& schema() const { return schema_; }
  const CellList& cells() const { return cells_; }
  size_t dims() const { return schema_.dims(); }
  int64_t total_count() const { return total_count_; }

  int64_t CountAt(std::span<const uint32_t> coord) const;

 private:
  Schema schema_;
  CellList cells_;
  int64_t total_count_ = 0;
};

// Raw text table: a header row plus data rows.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 style reader: quoted fields may contain the delimiter, newlines
// and doubled quotes.
absl::StatusOr<Table> ReadCsv(std::istream& in, char delimiter = ',');
absl::StatusOr<Table> ReadCsvFile(const std::string& path,
                                  char delimiter = ',');

struct LoadOptions {
  bool clamp = false;
};

// Bins and encodes every row per the schema. Attributes declared without a
// category list take categories in order of first appearance; the returned
// tensor's schema lists them explicitly.
absl::StatusOr<CountTensor> LoadTable(const Table& table, Schema schema,
                                      const LoadOptions& options = {});

}  // namespace pview

#endif  // PVIEW_COUNT_TENSOR_H_
