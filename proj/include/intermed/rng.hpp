// Copyright 2026 The intermed Authors
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

#ifndef INTERMED_RNG_HPP_
#define INTERMED_RNG_HPP_

#include <cstdint>

namespace intermed {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += kGoldenGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Key of the substream `index` under `seed`. Distinct (seed, index) pairs give
// unrelated keys.
constexpr std::uint64_t substream_key(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index * 0xD1B54A32D192ED03ULL + 1));
}

// Counter-based stream: the k-th draw is a pure function of (key, k), so a
// shard can be replayed or split without touching any shared state.
class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t next_u64() {
    return splitmix64(key_ + kGoldenGamma * ++counter_);
  }

  // Uniform on the open interval (0, 1).
  constexpr double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  constexpr double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
  }

  // Uniform integer in [0, bound).
  constexpr std::uint64_t next_below(std::uint64_t bound) {
    return bound == 0 ? 0 : next_u64() % bound;
  }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace intermed

#endif  // INTERMED_RNG_HPP_
