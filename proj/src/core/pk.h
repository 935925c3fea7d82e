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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "image.h"

namespace spcx {

// Block: sub-image (i,j) is the contiguous r x r tile at rows [i*r, i*r+r),
// cols [j*r, j*r+r). Phase: sub-image (s,t) gathers every pixel at
// (s + a*r, t + b*r), i.e. pixel unshuffle.
enum class PkMode { kBlock = 0, kPhase = 1 };

const char* to_string(PkMode mode);
PkMode parse_pk_mode(const std::string& name);

// Flattened sub-images of one image. Sub-images are ordered row-major over
// their grid index; each vector is row-major with channels innermost.
class SubImageCollection {
 public:
  SubImageCollection(PkMode mode, int rate, int src_height, int src_width,
                     int src_channels, std::vector<double> values);

  PkMode mode() const { return mode_; }
  int rate() const { return rate_; }
  int src_height() const { return src_height_; }
  int src_width() const { return src_width_; }
  int src_channels() const { return src_channels_; }

  std::size_t count() const { return count_; }
  std::size_t dim() const { return dim_; }
  // Spatial shape of a single sub-image.
  int sub_height() const;
  int sub_width() const;

  std::span<const double> vector(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<double> vector(std::size_t i) {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  Image sub_image(std::size_t i) const;

  friend bool operator==(const SubImageCollection&,
                         const SubImageCollection&) = default;

 private:
  PkMode mode_;
  int rate_;
  int src_height_, src_width_, src_channels_;
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

SubImageCollection pk_decompose(const Image& img, int rate,
                                PkMode mode = PkMode::kBlock);

// Exact inverse of pk_decompose; also used to scatter per-vector gradients
// back onto the pixel grid.
Image pk_recompose(const SubImageCollection& coll);

// Output vector k is input vector perm[k].
SubImageCollection permute_subimages(const SubImageCollection& coll,
                                     std::span<const std::size_t> perm);

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

// Rearranges the r x r tiles of an image: tile k of the result is tile perm[k]
// of the input.
Image block_permute(const Image& img, int rate,
                    std::span<const std::size_t> perm);

}  // namespace spcx
