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

#include "pview/workload.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "absl/strings/str_cat.h"

namespace pview {
namespace {

// How a workload family turns one attribute's domain into its options.
struct Family {
  std::string name;
  // Number of options for a domain of size d.
  std::function<uint64_t(uint64_t)> count;
  // The i-th option for a domain of size d.
  std::function<IndexRange(uint64_t, uint64_t)> option;
};

uint64_t Pairs(uint64_t d) { return d * (d + 1) / 2; }

IndexRange PairAt(uint64_t d, uint64_t i) {
  uint64_t s = 0;
  while (i >= d - s) {
    i -= d - s;
    ++s;
  }
  return {static_cast<uint32_t>(s), static_cast<uint32_t>(s + i)};
}

const Family& MarginalFamily() {
  static const Family f{
      "marginal", [](uint64_t d) { return d; },
      [](uint64_t, uint64_t i) {
        return IndexRange{static_cast<uint32_t>(i), static_cast<uint32_t>(i)};
      }};
  return f;
}

const Family& RangeFamily() {
  static const Family f{"range", Pairs, PairAt};
  return f;
}

const Family& PrefixFamily() {
  static const Family f{
      "prefix", [](uint64_t d) { return d; },
      [](uint64_t, uint64_t i) {
        return IndexRange{0, static_cast<uint32_t>(i)};
      }};
  return f;
}

absl::Status CheckK(const Schema& schema, int k) {
  if (k < 1 || static_cast<size_t>(k) > schema.dims()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "k must lie in [1, ", schema.dims(), "], got ", k));
  }
  return absl::OkStatus();
}

std::vector<std::vector<size_t>> Subsets(size_t d, int k) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> current;
  std::function<void(size_t)> rec = [&](size_t next) {
    if (current.size() == static_cast<size_t>(k)) {
      out.push_back(current);
      return;
    }
    for (size_t i = next; i < d; ++i) {
      current.push_back(i);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(0);
  return out;
}

// The enumeration is the concatenation, over subsets in lexicographic
// order, of the mixed-radix product of per-attribute options.
class Enumeration {
 public:
  Enumeration(const Schema& schema, int k, const Family& family)
      : schema_(schema), family_(family), subsets_(Subsets(schema.dims(), k)) {
    const auto domains = schema.DomainSizes();
    for (const auto& subset : subsets_) {
      long double n = 1;
      for (size_t a : subset) {
        n *= static_cast<long double>(family.count(domains[a]));
      }
      sizes_.push_back(n);
      total_ += n;
    }
  }

  long double total() const { return total_; }

  RangeQuery At(uint64_t index) const {
    size_t s = 0;
    while (static_cast<long double>(index) >= sizes_[s]) {
      index -= static_cast<uint64_t>(sizes_[s]);
      ++s;
    }
    return Decode(s, index);
  }

  // A uniform draw over the enumeration that does not need the total to fit
  // 64 bits: pick a subset in proportion to its size, then each option.
  RangeQuery Sample(RandomStream& rng) const {
    long double u = static_cast<long double>(rng.NextUniform()) * total_;
    size_t s = 0;
    while (s + 1 < sizes_.size() && u >= sizes_[s]) {
      u -= sizes_[s];
      ++s;
    }
    const auto domains = schema_.DomainSizes();
    RangeQuery q = RangeQuery::FullDomain(schema_);
    for (size_t a : subsets_[s]) {
      const uint64_t d = static_cast<uint64_t>(domains[a]);
      q.ranges[a] = family_.option(d, rng.NextBelow(family_.count(d)));
    }
    return q;
  }

 private:
  RangeQuery Decode(size_t s, uint64_t index) const {
    const auto domains = schema_.DomainSizes();
    RangeQuery q = RangeQuery::FullDomain(schema_);
    const auto& subset = subsets_[s];
    for (size_t j = subset.size(); j-- > 0;) {
      const uint64_t d = static_cast<uint64_t>(domains[subset[j]]);
      const uint64_t n = family_.count(d);
      q.ranges[subset[j]] = family_.option(d, index % n);
      index /= n;
    }
    return q;
  }

  const Schema& schema_;
  const Family& family_;
  std::vector<std::vector<size_t>> subsets_;
  std::vector<long double> sizes_;
  long double total_ = 0;
};

struct QueryHash {
  size_t operator()(const RangeQuery& q) const {
    uint64_t h = 0;
    for (const auto& r : q.ranges) {
      h = SplitMix64Mix(h ^ ((static_cast<uint64_t>(r.lo) << 32) | r.hi));
    }
    return static_cast<size_t>(h);
  }
};

absl::StatusOr<Workload> Generate(const Schema& schema, int k,
                                  const Family& family,
                                  std::optional<uint64_t> limit,
                                  RandomStream* rng) {
  if (auto s = CheckK(schema, k); !s.ok()) return s;
  Workload w;
  w.name = absl::StrCat(family.name, "-", k, "d");
  Enumeration e(schema, k, family);
  // Different subsets can spell the same query (a chosen attribute given its
  // full range), so every path keeps the first occurrence only.
  std::unordered_set<RangeQuery, QueryHash> seen;
  auto keep = [&](RangeQuery q) {
    if (seen.insert(q).second) w.queries.push_back(std::move(q));
  };
  if (!limit.has_value() || e.total() <= static_cast<long double>(*limit)) {
    if (e.total() > 5e7L) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "enumeration of ", static_cast<double>(e.total()),
          " queries needs a limit"));
    }
    const uint64_t n = static_cast<uint64_t>(e.total());
    for (uint64_t i = 0; i < n; ++i) keep(e.At(i));
    return w;
  }
  if (rng == nullptr) {
    return absl::InvalidArgumentError("subsampling needs a random stream");
  }
  // limit < total. When the limit is a large share of the enumeration, walk
  // a random permutation of the indices instead of rejection sampling.
  if (static_cast<long double>(*limit) * 2 > e.total()) {
    const uint64_t n = static_cast<uint64_t>(e.total());
    std::vector<uint64_t> index(n);
    for (uint64_t i = 0; i < n; ++i) index[i] = i;
    for (uint64_t i = 0; i < n && w.queries.size() < *limit; ++i) {
      std::swap(index[i], index[i + rng->NextBelow(n - i)]);
      keep(e.At(index[i]));
    }
    return w;
  }
  while (w.queries.size() < *limit) keep(e.Sample(*rng));
  return w;
}

}  // namespace

IndexRange RandomInterval(uint64_t domain, RandomStream& rng) {
  // Ranges [s, e] of d values pair up with distinct cut points a < b among
  // d + 1 boundaries: s = a, e = b - 1.
  uint64_t a = rng.NextBelow(domain + 1);
  uint64_t b = rng.NextBelow(domain);
  if (b >= a) ++b;
  if (a > b) std::swap(a, b);
  return {static_cast<uint32_t>(a), static_cast<uint32_t>(b - 1)};
}

absl::StatusOr<Workload> GenKwayMarginal(const Schema& schema, int k,
                                         std::optional<uint64_t> limit,
                                         RandomStream* rng) {
  return Generate(schema, k, MarginalFamily(), limit, rng);
}

absl::StatusOr<Workload> GenKwayRange(const Schema& schema, int k,
                                      uint64_t limit, RandomStream& rng) {
  if (limit == 0) {
    return absl::InvalidArgumentError("k-way range limit must be positive");
  }
  return Generate(schema, k, RangeFamily(), limit, &rng);
}

absl::StatusOr<Workload> GenPrefix(const Schema& schema, int k,
                                   std::optional<uint64_t> limit,
                                   RandomStream* rng) {
  return Generate(schema, k, PrefixFamily(), limit, rng);
}

absl::StatusOr<Workload> GenRandomRange(const Schema& schema, int k,
                                        uint64_t count, RandomStream& rng) {
  if (auto s = CheckK(schema, k); !s.ok()) return s;
  if (count == 0) {
    return absl::InvalidArgumentError("query count must be positive");
  }
  Workload w;
  w.name = absl::StrCat("random-", k, "d");
  const auto domains = schema.DomainSizes();
  std::vector<size_t> attrs(schema.dims());
  for (size_t i = 0; i < attrs.size(); ++i) attrs[i] = i;
  w.queries.reserve(count);
  for (uint64_t n = 0; n < count; ++n) {
    for (int i = 0; i < k; ++i) {
      std::swap(attrs[i], attrs[i + rng.NextBelow(attrs.size() - i)]);
    }
    RangeQuery q = RangeQuery::FullDomain(schema);
    for (int i = 0; i < k; ++i) {
      q.ranges[attrs[i]] =
          RandomInterval(static_cast<uint64_t>(domains[attrs[i]]), rng);
    }
    w.queries.push_back(std::move(q));
  }
  return w;
}

}  // namespace pview
