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

#include "features.h"

#include <cmath>

#include "error.h"
#include "rng.h"

namespace spcx {

std::vector<FeatureMap> IdentityExtractor::extract(const Image& img) const {
  return {FeatureMap{img.height(), img.width(), img.channels(), img.values()}};
}

RandomProjectionExtractor::RandomProjectionExtractor(std::uint64_t seed,
                                                     int out_channels,
                                                     std::vector<int> scales)
    : seed_(seed), out_channels_(out_channels), scales_(std::move(scales)) {
  require(out_channels_ >= 1, ErrorCode::kInvalidArgument,
          "projection needs at least one output channel");
  require(!scales_.empty(), ErrorCode::kInvalidArgument,
          "projection needs at least one scale");
  for (int s : scales_) {
    require(s >= 1, ErrorCode::kInvalidArgument, "scale must be >= 1");
  }
}

std::vector<FeatureMap> RandomProjectionExtractor::extract(
    const Image& img) const {
  const int c_in = img.channels();
  std::vector<FeatureMap> maps;
  for (int s : scales_) {
    const int h = img.height() / s, w = img.width() / s;
    require(h >= 1 && w >= 1, ErrorCode::kShapeMismatch,
            "image too small for projection scale " + std::to_string(s));
    SeededRng rng = SeededRng(seed_).fork(static_cast<std::uint64_t>(s))
                        .fork(static_cast<std::uint64_t>(c_in));
    std::vector<double> weights(static_cast<std::size_t>(out_channels_) * c_in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(c_in));
    for (double& wv : weights) wv = rng.normal() * scale;

    FeatureMap fm{h, w, out_channels_, {}};
    fm.values.assign(static_cast<std::size_t>(h) * w * out_channels_, 0.0);
    std::vector<double> pooled(c_in);
    const double inv_area = 1.0 / (s * s);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        std::fill(pooled.begin(), pooled.end(), 0.0);
        for (int dy = 0; dy < s; ++dy) {
          for (int dx = 0; dx < s; ++dx) {
            for (int c = 0; c < c_in; ++c) {
              pooled[c] += img.at(y * s + dy, x * s + dx, c);
            }
          }
        }
        double* out = &fm.values[(static_cast<std::size_t>(y) * w + x) *
                                 out_channels_];
        for (int o = 0; o < out_channels_; ++o) {
          double acc = 0.0;
          for (int c = 0; c < c_in; ++c) {
            acc += weights[o * c_in + c] * pooled[c] * inv_area;
          }
          out[o] = acc;
        }
      }
    }
    maps.push_back(std::move(fm));
  }
  return maps;
}

std::unique_ptr<FeatureExtractor> make_extractor(const std::string& kind,
                                                 std::uint64_t seed) {
  if (kind == "identity") return std::make_unique<IdentityExtractor>();
  if (kind == "random-projection") {
    return std::make_unique<RandomProjectionExtractor>(seed);
  }
  fail(ErrorCode::kInvalidArgument,
       "unknown feature extractor '" + kind +
           "' (expected identity|random-projection)");
}

double DiscriminatorStub::logit(const Image& img) const {
  const std::size_t n = img.size();
  SeededRng rng = SeededRng(seed_).fork("discriminator").fork(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  double acc = rng.normal() * 0.1;
  for (double v : img.data()) acc += rng.normal() * scale * v;
  return acc;
}

}  // namespace spcx
