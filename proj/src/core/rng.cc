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

#include "rng.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "error.h"

namespace spcx {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SeededRng::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * kGamma);
}

double SeededRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) {
  if (!(lo < hi)) {
    std::ostringstream msg;
    msg << "uniform range requires lo < hi, got [" << lo << ", " << hi << ")";
    fail(ErrorCode::kInvalidArgument, msg.str());
  }
  double v = lo + (hi - lo) * next_double();
  return v < hi ? v : std::nextafter(hi, lo);
}

std::vector<double> SeededRng::uniform(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  if (n == 0) uniform(lo, hi);  // still validate the range
  for (std::size_t i = 0; i < n; ++i) out.push_back(uniform(lo, hi));
  return out;
}

double SeededRng::normal() {
  // u1 in (0,1] keeps the log finite.
  double u1 = 1.0 - next_double();
  double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SeededRng SeededRng::fork(std::string_view label) const {
  // FNV-1a over the label, then mixed with the parent seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fork(h);
}

SeededRng SeededRng::fork(std::uint64_t stream) const {
  return SeededRng(mix64(seed_ ^ mix64(stream + kGamma)));
}

}  // namespace spcx
