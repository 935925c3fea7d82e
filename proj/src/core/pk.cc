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

#include "pk.h"

#include <string>

#include "error.h"

namespace spcx {

namespace {

void check_rate(int rate, int height, int width) {
  require(rate >= 1, ErrorCode::kInvalidArgument,
          "PK rate must be >= 1, got " + std::to_string(rate));
  require(height % rate == 0 && width % rate == 0,
          ErrorCode::kInvalidArgument,
          "PK rate " + std::to_string(rate) + " does not divide image size " +
              std::to_string(height) + "x" + std::to_string(width));
}

// Flat source-pixel offset of element `e` of sub-image `n`.
struct IndexMap {
  PkMode mode;
  int rate, height, width, channels;

  std::size_t operator()(std::size_t n, std::size_t e) const {
    const std::size_t c = e % channels;
    const std::size_t pix = e / channels;
    const std::size_t r = rate;
    std::size_t y, x;
    if (mode == PkMode::kBlock) {
      const std::size_t tiles_x = width / rate;
      y = (n / tiles_x) * r + pix / r;
      x = (n % tiles_x) * r + pix % r;
    } else {
      const std::size_t sub_w = width / rate;
      y = n / r + (pix / sub_w) * r;
      x = n % r + (pix % sub_w) * r;
    }
    return (y * width + x) * channels + c;
  }
};

}  // namespace

const char* to_string(PkMode mode) {
  return mode == PkMode::kBlock ? "block" : "phase";
}

PkMode parse_pk_mode(const std::string& name) {
  if (name == "block") return PkMode::kBlock;
  if (name == "phase") return PkMode::kPhase;
  fail(ErrorCode::kInvalidArgument,
       "unknown PK mode '" + name + "' (expected block|phase)");
}

SubImageCollection::SubImageCollection(PkMode mode, int rate, int src_height,
                                       int src_width, int src_channels,
                                       std::vector<double> values)
    : mode_(mode), rate_(rate), src_height_(src_height),
      src_width_(src_width), src_channels_(src_channels),
      values_(std::move(values)) {
  require(src_height > 0 && src_width > 0 &&
              (src_channels == 1 || src_channels == 3),
          ErrorCode::kShapeMismatch, "invalid source shape for sub-images");
  check_rate(rate, src_height, src_width);
  const std::size_t r = rate;
  const std::size_t hw = static_cast<std::size_t>(src_height) * src_width;
  if (mode == PkMode::kBlock) {
    count_ = hw / (r * r);
    dim_ = r * r * src_channels;
  } else {
    count_ = r * r;
    dim_ = hw / (r * r) * src_channels;
  }
  require(values_.size() == count_ * dim_, ErrorCode::kShapeMismatch,
          "sub-image data length " + std::to_string(values_.size()) +
              " does not match " + std::to_string(count_) + " x " +
              std::to_string(dim_));
}

int SubImageCollection::sub_height() const {
  return mode_ == PkMode::kBlock ? rate_ : src_height_ / rate_;
}

int SubImageCollection::sub_width() const {
  return mode_ == PkMode::kBlock ? rate_ : src_width_ / rate_;
}

Image SubImageCollection::sub_image(std::size_t i) const {
  require(i < count_, ErrorCode::kInvalidArgument,
          "sub-image index " + std::to_string(i) + " out of range");
  auto v = vector(i);
  return Image(sub_height(), sub_width(), src_channels_,
               std::vector<double>(v.begin(), v.end()));
}

SubImageCollection pk_decompose(const Image& img, int rate, PkMode mode) {
  require(!img.empty(), ErrorCode::kInvalidArgument, "PK of empty image");
  check_rate(rate, img.height(), img.width());
  const IndexMap map{mode, rate, img.height(), img.width(), img.channels()};
  std::vector<double> values(img.size());
  auto src = img.data();
  const std::size_t r = rate;
  const std::size_t count =
      mode == PkMode::kBlock ? img.size() / img.channels() / (r * r) : r * r;
  const std::size_t dim = img.size() / count;
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t e = 0; e < dim; ++e) values[n * dim + e] = src[map(n, e)];
  }
  return SubImageCollection(mode, rate, img.height(), img.width(),
                            img.channels(), std::move(values));
}

Image pk_recompose(const SubImageCollection& coll) {
  Image out(coll.src_height(), coll.src_width(), coll.src_channels());
  const IndexMap map{coll.mode(), coll.rate(), coll.src_height(),
                     coll.src_width(), coll.src_channels()};
  auto dst = out.data();
  for (std::size_t n = 0; n < coll.count(); ++n) {
    auto v = coll.vector(n);
    for (std::size_t e = 0; e < coll.dim(); ++e) dst[map(n, e)] = v[e];
  }
  return out;
}

std::vector<std::size_t> inverse_permutation(
    std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size(), perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    require(perm[k] < perm.size() && inv[perm[k]] == perm.size(),
            ErrorCode::kInvalidArgument,
            "not a permutation: entry " + std::to_string(k) + " = " +
                std::to_string(perm[k]) + " is out of range or repeated");
    inv[perm[k]] = k;
  }
  return inv;
}

SubImageCollection permute_subimages(const SubImageCollection& coll,
                                     std::span<const std::size_t> perm) {
  require(perm.size() == coll.count(), ErrorCode::kInvalidArgument,
          "permutation length " + std::to_string(perm.size()) +
              " does not match sub-image count " +
              std::to_string(coll.count()));
  inverse_permutation(perm);  // validates bijectivity
  std::vector<double> values(coll.values().size());
  const std::size_t dim = coll.dim();
  for (std::size_t k = 0; k < perm.size(); ++k) {
    auto v = coll.vector(perm[k]);
    std::copy(v.begin(), v.end(), values.begin() + k * dim);
  }
  return SubImageCollection(coll.mode(), coll.rate(), coll.src_height(),
                            coll.src_width(), coll.src_channels(),
                            std::move(values));
}

Image block_permute(const Image& img, int rate,
                    std::span<const std::size_t> perm) {
  return pk_recompose(
      permute_subimages(pk_decompose(img, rate, PkMode::kBlock), perm));
}

}  // namespace spcx
