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

#ifndef PVIEW_RANDOM_STREAM_H_
#define PVIEW_RANDOM_STREAM_H_

#include <cstdint>
#include <limits>
#include <vector>

namespace pview {

uint64_t SplitMix64Mix(uint64_t z);

// A deterministic random stream identified by (seed, path).
//
// Derivation rule, so that other implementations can replay a view:
//   key(seed, [])           = mix(seed)
//   key(seed, path + [c])   = mix(key(seed, path) ^ mix(c + 0x9E3779B97F4A7C15))
// where mix is the SplitMix64 finalizer. The stream is the SplitMix64
// sequence started from that key: state += 0x9E3779B97F4A7C15 and output
// mix(state) on every draw. Uniform doubles take the top 53 bits.
//
// Streams are not shareable; each unit of work derives its own child.
class RandomStream {
 public:
  using result_type = uint64_t;

  explicit RandomStream(uint64_t seed);

  RandomStream Child(uint64_t index) const;

  uint64_t seed() const { return seed_; }
  const std::vector<uint64_t>& path() const { return path_; }

  uint64_t NextU64();
  // Uniform on [0, 1).
  double NextUniform();
  // Uniform on the open interval (0, 1).
  double NextOpenUniform();
  // Uniform integer in [0, n); n must be positive.
  uint64_t NextBelow(uint64_t n);

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

 private:
  uint64_t seed_;
  std::vector<uint64_t> path_;
  uint64_t key_;
  uint64_t state_;
};

}  // namespace pview

#endif  // PVIEW_RANDOM_STREAM_H_
