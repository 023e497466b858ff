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

#include "pview/block.h"

#include "absl/strings/str_cat.h"

namespace pview {

double RangesSize(const Ranges& ranges) {
  double size = 1.0;
  for (const auto& r : ranges) size *= static_cast<double>(r.extent());
  return size;
}

std::optional<uint64_t> RangesSizeExact(const Ranges& ranges) {
  uint64_t size = 1;
  for (const auto& r : ranges) {
    if (size > UINT64_MAX / r.extent()) return std::nullopt;
    size *= r.extent();
  }
  return size;
}

double IntersectionSize(const Ranges& a, const Ranges& b) {
  double size = 1.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const uint32_t lo = std::max(a[i].lo, b[i].lo);
    const uint32_t hi = std::min(a[i].hi, b[i].hi);
    if (lo > hi) return 0.0;
    size *= static_cast<double>(hi - lo + 1);
  }
  return size;
}

uint64_t Block::CutCandidateCount() const {
  uint64_t n = 0;
  for (const auto& r : ranges_) n += r.extent() - 1;
  return n;
}

void Block::Finish() {
  size_ = RangesSize(ranges_);
  sum_ = 0;
  for (int64_t c : cells_.counts()) sum_ += c;
}

Block RootBlock(const CountTensor& tensor) {
  Block root;
  for (int64_t size : tensor.schema().DomainSizes()) {
    root.ranges_.push_back({0, static_cast<uint32_t>(size - 1)});
  }
  root.cells_ = tensor.cells();
  root.depth_ = 0;
  root.Finish();
  return root;
}

absl::StatusOr<std::pair<Block, Block>> SplitBlock(const Block& block,
                                                   size_t axis,
                                                   uint32_t position) {
  if (axis >= block.dims()) {
    return absl::InvalidArgumentError(
        absl::StrCat("split axis ", axis, " out of range"));
  }
  const IndexRange r = block.ranges_[axis];
  if (position < r.lo || position >= r.hi) {
    return absl::FailedPreconditionError(absl::StrCat(
        "split position ", position, " outside [", r.lo, ", ", r.hi - 1,
        "] on axis ", axis));
  }
  Block left;
  Block right;
  left.ranges_ = right.ranges_ = block.ranges_;
  left.ranges_[axis].hi = position;
  right.ranges_[axis].lo = position + 1;
  left.depth_ = right.depth_ = block.depth_ + 1;
  left.cells_ = CellList(block.dims());
  right.cells_ = CellList(block.dims());
  const CellList& cells = block.cells_;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (cells.coord(i, axis) <= position) {
      left.cells_.AppendFrom(cells, i);
    } else {
      right.cells_.AppendFrom(cells, i);
    }
  }
  left.Finish();
  right.Finish();
  return std::make_pair(std::move(left), std::move(right));
}

namespace {

bool InsideRanges(std::span<const uint32_t> coord, const Ranges& ranges) {
  for (size_t i = 0; i < ranges.size(); ++i) {
    if (!ranges[i].Contains(coord[i])) return false;
  }
  return true;
}

}  // namespace

absl::StatusOr<Block> SubBlock(const Block& block, const Ranges& ranges) {
  if (ranges.size() != block.dims()) {
    return absl::InvalidArgumentError("sub-block dimensionality mismatch");
  }
  for (size_t i = 0; i < ranges.size(); ++i) {
    if (ranges[i].lo > ranges[i].hi || ranges[i].lo < block.ranges_[i].lo ||
        ranges[i].hi > block.ranges_[i].hi) {
      return absl::OutOfRangeError(
          absl::StrCat("sub-block range on axis ", i, " leaves the block"));
    }
  }
  Block sub;
  sub.ranges_ = ranges;
  sub.depth_ = block.depth_;
  sub.cells_ = CellList(block.dims());
  for (size_t i = 0; i < block.cells_.size(); ++i) {
    if (InsideRanges(block.cells_.coord(i), ranges)) {
      sub.cells_.AppendFrom(block.cells_, i);
    }
  }
  sub.Finish();
  return sub;
}

absl::StatusOr<Block> BlockFromRanges(const CountTensor& tensor,
                                      const Ranges& ranges, int depth) {
  Block root = RootBlock(tensor);
  auto sub = SubBlock(root, ranges);
  if (!sub.ok()) return sub.status();
  sub->depth_ = depth;
  return sub;
}

}  // namespace pview
