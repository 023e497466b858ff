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

#include "pview/count_tensor.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/ascii.h"
#include "pview/status_macros.h"

namespace pview {

absl::StatusOr<CountTensor> CountTensor::FromCells(
    Schema schema, std::vector<std::pair<Coord, int64_t>> cells) {
  RETURN_IF_ERROR(schema.Validate());
  const size_t d = schema.dims();
  const auto domains = schema.DomainSizes();
  for (const auto& [coord, count] : cells) {
    if (coord.size() != d) {
      return absl::InvalidArgumentError(absl::StrCat(
          "coordinate has ", coord.size(), " components, expected ", d));
    }
    for (size_t i = 0; i < d; ++i) {
      if (coord[i] >= domains[i]) {
        return absl::OutOfRangeError(absl::StrCat(
            "coordinate ", coord[i], " outside domain of attribute '",
            schema.attribute(i).name, "'"));
      }
    }
  }
  std::sort(cells.begin(), cells.end());

  CountTensor tensor;
  tensor.schema_ = std::move(schema);
  tensor.cells_ = CellList(d);
  tensor.cells_.Reserve(cells.size());
  for (size_t i = 0; i < cells.size();) {
    size_t j = i;
    int64_t total = 0;
    while (j < cells.size() && cells[j].first == cells[i].first) {
      total += cells[j].second;
      ++j;
    }
    if (total > 0) {
      tensor.cells_.Append(cells[i].first, total);
      tensor.total_count_ += total;
    } else if (total < 0) {
      return absl::InvalidArgumentError("negative cell count");
    }
    i = j;
  }
  return tensor;
}

absl::StatusOr<CountTensor> CountTensor::FromRecords(
    Schema schema, const std::vector<Coord>& records) {
  std::map<Coord, int64_t> merged;
  for (const auto& r : records) ++merged[r];
  std::vector<std::pair<Coord, int64_t>> cells(merged.begin(), merged.end());
  return FromCells(std::move(schema), std::move(cells));
}

int64_t CountTensor::CountAt(std::span<const uint32_t> coord) const {
  size_t lo = 0;
  size_t hi = cells_.size();
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    auto c = cells_.coord(mid);
    if (std::lexicographical_compare(c.begin(), c.end(), coord.begin(),
                                     coord.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < cells_.size() && std::ranges::equal(cells_.coord(lo), coord)) {
    return cells_.count(lo);
  }
  return 0;
}

absl::StatusOr<Table> ReadCsv(std::istream& in, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool any = false;
  char c;
  size_t line = 1;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) {
      records.push_back(std::move(record));
    }
    record.clear();
  };
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      ++line;
      end_record();
    } else if (c == '\r') {
      // Tolerate CRLF line endings.
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError(
        absl::StrCat("unterminated quoted field near line ", line));
  }
  if (any && (field_started || !field.empty() || !record.empty())) {
    end_record();
  }
  if (records.empty()) return absl::InvalidArgumentError("CSV has no header");
  Table table;
  table.header = std::move(records.front());
  for (auto& h : table.header) h = std::string(absl::StripAsciiWhitespace(h));
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

absl::StatusOr<Table> ReadCsvFile(const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ReadCsv(in, delimiter);
}

namespace {

std::string_view Trim(std::string_view text) {
  while (!text.empty() && absl::ascii_isspace(text.front())) text.remove_prefix(1);
  while (!text.empty() && absl::ascii_isspace(text.back())) text.remove_suffix(1);
  return text;
}

absl::StatusOr<double> ParseNumber(std::string_view text) {
  text = Trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", std::string(text), "' is not a number"));
  }
  return value;
}

}  // namespace

absl::StatusOr<CountTensor> LoadTable(const Table& table, Schema schema,
                                      const LoadOptions& options) {
  const size_t d = schema.dims();
  std::vector<size_t> column(d);
  for (size_t i = 0; i < d; ++i) {
    auto it = std::find(table.header.begin(), table.header.end(),
                        schema.attribute(i).name);
    if (it == table.header.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "CSV header lacks attribute '", schema.attribute(i).name, "'"));
    }
    column[i] = static_cast<size_t>(it - table.header.begin());
  }

  std::map<Coord, int64_t> merged;
  Coord coord(d);
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (size_t i = 0; i < d; ++i) {
      auto& spec = schema.mutable_attributes()[i];
      if (column[i] >= row.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "row ", r, ": missing value for attribute '", spec.name, "'"));
      }
      const std::string& cell = row[column[i]];
      if (spec.kind == AttributeKind::kNumeric) {
        auto value = ParseNumber(cell);
        if (!value.ok()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row ", r, ", attribute '", spec.name, "': ",
              value.status().message()));
        }
        auto bin = spec.BinOf(*value, options.clamp);
        if (!bin.ok()) {
          return absl::Status(bin.status().code(),
                              absl::StrCat("row ", r, ": ",
                                           bin.status().message()));
        }
        coord[i] = *bin;
      } else {
        auto index = spec.CategoryIndex(cell);
        if (!index.ok()) {
          if (!spec.open_categories) {
            return absl::InvalidArgumentError(absl::StrCat(
                "row ", r, ": ", index.status().message()));
          }
          spec.categories.push_back(cell);
          index = static_cast<uint32_t>(spec.categories.size() - 1);
        }
        coord[i] = *index;
      }
    }
    ++merged[coord];
  }

  for (auto& spec : schema.mutable_attributes()) {
    if (spec.open_categories && spec.categories.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", spec.name, "' lists no categories and has no data"));
    }
    spec.open_categories = false;
  }
  std::vector<std::pair<Coord, int64_t>> cells(merged.begin(), merged.end());
  return CountTensor::FromCells(std::move(schema), std::move(cells));
}

}  // namespace pview
