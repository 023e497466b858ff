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

#include "pview/range_expr.h"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <set>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace pview {
namespace {

std::string Trimmed(std::string_view s) {
  std::string out(s);
  absl::StripAsciiWhitespace(&out);
  return out;
}

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t at = s.find(sep, start);
    if (at == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, at - start));
    start = at + 1;
  }
}

std::string Describe(const RangeValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return absl::StrCat(*d);
  return absl::StrCat("'", std::get<std::string>(v), "'");
}

absl::StatusOr<uint32_t> BinIndex(const AttributeSpec& a,
                                  const RangeValue& v) {
  double index = 0.0;
  if (const auto* d = std::get_if<double>(&v)) {
    index = *d;
  } else {
    const std::string& s = std::get<std::string>(v);
    char* end = nullptr;
    errno = 0;
    index = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno != 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", a.name, "': bin index '", s, "' is not a number"));
    }
  }
  if (!(index >= 0.0) || index != std::floor(index)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "attribute '", a.name, "': bin index ", Describe(v),
        " must be a non-negative integer"));
  }
  if (index >= static_cast<double>(a.DomainSize())) {
    return absl::OutOfRangeError(absl::StrCat(
        "attribute '", a.name, "': bin index ", Describe(v),
        " leaves domain [0, ", a.DomainSize() - 1, "]"));
  }
  return static_cast<uint32_t>(index);
}

absl::StatusOr<double> RawNumber(const AttributeSpec& a, const RangeValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  const std::string& s = std::get<std::string>(v);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno != 0 ||
      !std::isfinite(value)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "attribute '", a.name, "': '", s, "' is not a number"));
  }
  return value;
}

absl::StatusOr<uint32_t> RawCategory(const AttributeSpec& a,
                                     const RangeValue& v) {
  std::string name;
  if (const auto* d = std::get_if<double>(&v)) {
    name = absl::StrCat(*d);
  } else {
    name = std::get<std::string>(v);
  }
  auto index = a.CategoryIndex(name);
  if (!index.ok()) {
    return absl::OutOfRangeError(absl::StrCat(
        "attribute '", a.name, "': unknown category '", name, "'"));
  }
  return *index;
}

absl::StatusOr<uint32_t> RawBin(const AttributeSpec& a, double value) {
  auto bin = a.BinOf(value);
  if (!bin.ok()) {
    return absl::OutOfRangeError(absl::StrCat(
        "attribute '", a.name, "': value ", value, " leaves [",
        a.bin_edges.front(), ", ", a.bin_edges.back(), "]"));
  }
  return *bin;
}

absl::StatusOr<RangeValue> ParseValue(std::string_view text) {
  std::string s = Trimmed(text);
  if (s.empty()) return absl::InvalidArgumentError("empty range bound");
  return RangeValue(std::move(s));
}

}  // namespace

absl::StatusOr<IndexRange> ResolveRange(const AttributeSpec& a,
                                        const RangeValue& lo,
                                        const RangeValue& hi, bool raw) {
  IndexRange r;
  if (!raw) {
    auto l = BinIndex(a, lo);
    if (!l.ok()) return l.status();
    auto h = BinIndex(a, hi);
    if (!h.ok()) return h.status();
    r = {*l, *h};
  } else if (a.kind == AttributeKind::kCategorical) {
    auto l = RawCategory(a, lo);
    if (!l.ok()) return l.status();
    auto h = RawCategory(a, hi);
    if (!h.ok()) return h.status();
    r = {*l, *h};
  } else {
    auto l = RawNumber(a, lo);
    if (!l.ok()) return l.status();
    auto h = RawNumber(a, hi);
    if (!h.ok()) return h.status();
    if (*l > *h) {
      return absl::FailedPreconditionError(absl::StrCat(
          "attribute '", a.name, "': lo ", *l, " > hi ", *h));
    }
    auto lbin = RawBin(a, *l);
    if (!lbin.ok()) return lbin.status();
    auto hbin = RawBin(a, *h);
    if (!hbin.ok()) return hbin.status();
    r = {*lbin, *hbin};
    // An upper end sitting on an interior edge closes the bin before it.
    if (*h > *l && *hbin > *lbin && a.bin_edges[*hbin] == *h) --r.hi;
  }
  if (r.lo > r.hi) {
    return absl::FailedPreconditionError(absl::StrCat(
        "attribute '", a.name, "': lo ", Describe(lo), " > hi ",
        Describe(hi)));
  }
  return r;
}

absl::StatusOr<RangeQuery> ParseRangeExpression(const Schema& schema,
                                                std::string_view expression) {
  RangeQuery query = RangeQuery::FullDomain(schema);
  if (Trimmed(expression).empty()) return query;
  std::set<size_t> seen;
  for (const std::string& term : Split(expression, ',')) {
    const std::string t = Trimmed(term);
    const size_t op = t.find_first_of("=@");
    if (op == std::string::npos) {
      return absl::InvalidArgumentError(absl::StrCat(
          "term '", t, "' needs attr=lo:hi (values) or attr@lo:hi (bins)"));
    }
    const std::string name = Trimmed(std::string_view(t).substr(0, op));
    const bool raw = t[op] == '=';
    auto index = schema.IndexOf(name);
    if (!index.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown attribute '", name, "'"));
    }
    if (!seen.insert(*index).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute '", name, "' appears twice"));
    }
    const std::vector<std::string> parts =
        Split(std::string_view(t).substr(op + 1), ':');
    if (parts.size() > 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("term '", t, "' has more than one ':'"));
    }
    auto lo = ParseValue(parts[0]);
    if (!lo.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("term '", t, "': ", lo.status().message()));
    }
    auto hi = parts.size() == 2 ? ParseValue(parts[1]) : lo;
    if (!hi.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("term '", t, "': ", hi.status().message()));
    }
    auto range = ResolveRange(schema.attribute(*index), *lo, *hi, raw);
    if (!range.ok()) return range.status();
    query.ranges[*index] = *range;
  }
  return query;
}

std::string FormatRangeExpression(const Schema& schema,
                                  const RangeQuery& query) {
  std::vector<std::string> terms;
  for (size_t i = 0; i < query.ranges.size() && i < schema.dims(); ++i) {
    terms.push_back(absl::StrCat(schema.attribute(i).name, "@",
                                 query.ranges[i].lo, ":", query.ranges[i].hi));
  }
  return absl::StrJoin(terms, ",");
}

}  // namespace pview
