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

#ifndef PVIEW_BLOCK_H_
#define PVIEW_BLOCK_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "pview/count_tensor.h"

namespace pview {

// Inclusive index range [lo, hi].
struct IndexRange {
  uint32_t lo = 0;
  uint32_t hi = 0;

  uint64_t extent() const { return static_cast<uint64_t>(hi) - lo + 1; }
  bool Contains(uint32_t v) const { return lo <= v && v <= hi; }

  friend auto operator<=>(const IndexRange&, const IndexRange&) = default;
};

using Ranges = std::vector<IndexRange>;

// Number of cells covered by `ranges`, as a double so that domains far past
// 2^64 stay representable.
double RangesSize(const Ranges& ranges);
std::optional<uint64_t> RangesSizeExact(const Ranges& ranges);
// Cells shared by two range sets; 0 when they do not overlap.
double IntersectionSize(const Ranges& a, const Ranges& b);

// A contiguous sub-tensor. The block owns exactly the nonzero cells inside
// its ranges, so statistics stay local to it.
class Block {
 public:
  Block() = default;

  const Ranges& ranges() const { return ranges_; }
  const CellList& cells() const { return cells_; }
  size_t dims() const { return ranges_.size(); }
  double size() const { return size_; }
  int64_t sum() const { return sum_; }
  size_t nonzero_cells() const { return cells_.size(); }
  // Number of cuts from the root; the root has depth 0.
  int depth() const { return depth_; }

  // Cut candidates: sum over axes of (extent - 1).
  uint64_t CutCandidateCount() const;
  bool IsAtomic() const { return CutCandidateCount() == 0; }

 private:
  friend Block RootBlock(const CountTensor&);
  friend absl::StatusOr<std::pair<Block, Block>> SplitBlock(const Block&,
                                                            size_t, uint32_t);
  friend absl::StatusOr<Block> SubBlock(const Block&, const Ranges&);
  friend absl::StatusOr<Block> BlockFromRanges(const CountTensor&,
                                               const Ranges&, int);

  void Finish();

  Ranges ranges_;
  CellList cells_;
  double size_ = 0.0;
  int64_t sum_ = 0;
  int depth_ = 0;
};

// Block covering every full domain at depth 0.
Block RootBlock(const CountTensor& tensor);

// Left child gets [lo, position] on `axis`, right gets [position + 1, hi].
// Requires lo <= position < hi on that axis.
absl::StatusOr<std::pair<Block, Block>> SplitBlock(const Block& block,
                                                   size_t axis,
                                                   uint32_t position);

// Contiguous sub-block of `block` (ranges must nest inside it). Keeps the
// parent's depth.
absl::StatusOr<Block> SubBlock(const Block& block, const Ranges& ranges);

// Block over arbitrary in-domain ranges, gathered by a scan of the tensor.
absl::StatusOr<Block> BlockFromRanges(const CountTensor& tensor,
                                      const Ranges& ranges, int depth = 0);

}  // namespace pview

#endif  // PVIEW_BLOCK_H_
