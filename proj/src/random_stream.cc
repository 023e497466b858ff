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

#include "pview/random_stream.h"

namespace pview {
namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}  // namespace

uint64_t SplitMix64Mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(uint64_t seed)
    : seed_(seed), key_(SplitMix64Mix(seed)), state_(key_) {}

RandomStream RandomStream::Child(uint64_t index) const {
  RandomStream child(seed_);
  child.path_ = path_;
  child.path_.push_back(index);
  child.key_ = SplitMix64Mix(key_ ^ SplitMix64Mix(index + kGolden));
  child.state_ = child.key_;
  return child;
}

uint64_t RandomStream::NextU64() {
  state_ += kGolden;
  return SplitMix64Mix(state_);
}

double RandomStream::NextUniform() {
  return static_cast<double>(NextU64() >> 11) * kTwoPow53Inv;
}

double RandomStream::NextOpenUniform() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * kTwoPow53Inv;
}

uint64_t RandomStream::NextBelow(uint64_t n) {
  // Lemire's multiply-shift with rejection.
  uint64_t x = NextU64();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<uint64_t>(m);
  if (low < n) {
    const uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = NextU64();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<uint64_t>(m >> 64);
}

}  // namespace pview
