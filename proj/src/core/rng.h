// Copyright (c) 2026 The spcx Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace spcx {

// SplitMix64 used as a counter-based generator: draw k is mix(seed + k*gamma),
// so a stream is fully described by (seed, counter). Child streams are derived
// by hashing the parent seed with a stream label. Integer output is
// bit-identical on every platform; floating draws use only IEEE arithmetic
// plus std::log/std::cos for normals.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform in [0,1) with 53 random bits.
  double next_double();
  // Uniform in [lo, hi); throws when lo >= hi.
  double uniform(double lo, double hi);
  std::vector<double> uniform(double lo, double hi, std::size_t n);
  // Standard normal via Box-Muller (one draw pair per call, no caching).
  double normal();

  SeededRng fork(std::string_view label) const;
  SeededRng fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace spcx
