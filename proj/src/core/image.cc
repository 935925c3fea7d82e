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

#include "image.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "error.h"
#include "rng.h"

namespace spcx {

namespace {

void check_dims(int height, int width, int channels) {
  require(height > 0 && width > 0, ErrorCode::kInvalidArgument,
          "image dimensions must be positive");
  require(channels == 1 || channels == 3, ErrorCode::kInvalidArgument,
          "image must have 1 or 3 channels, got " + std::to_string(channels));
}

}  // namespace

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  check_dims(height, width, channels);
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

Image::Image(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels),
      data_(std::move(data)) {
  check_dims(height, width, channels);
  require(data_.size() == static_cast<std::size_t>(height) * width * channels,
          ErrorCode::kShapeMismatch,
          "image data length " + std::to_string(data_.size()) +
              " does not match " + std::to_string(height) + "x" +
              std::to_string(width) + "x" + std::to_string(channels));
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (a.same_shape(b)) return;
  auto dims = [](const Image& i) {
    return std::to_string(i.height()) + "x" + std::to_string(i.width()) + "x" +
           std::to_string(i.channels());
  };
  fail(ErrorCode::kShapeMismatch,
       std::string(what) + ": shape mismatch " + dims(a) + " vs " + dims(b));
}

Image clamp01(Image img) {
  for (double& v : img.data()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

Image random_texture(int height, int width, int channels, SeededRng& rng) {
  Image out(height, width, channels);
  constexpr int kWaves = 6;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int c = 0; c < channels; ++c) {
    double fy[kWaves], fx[kWaves], ph[kWaves], amp[kWaves];
    for (int k = 0; k < kWaves; ++k) {
      fy[k] = rng.uniform(0.5, 3.0) / height;
      fx[k] = rng.uniform(0.5, 3.0) / width;
      ph[k] = rng.uniform(0.0, two_pi);
      amp[k] = rng.uniform(0.2, 1.0);
    }
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double s = 0.0, norm = 0.0;
        for (int k = 0; k < kWaves; ++k) {
          s += amp[k] * std::sin(two_pi * (fy[k] * y + fx[k] * x) + ph[k]);
          norm += amp[k];
        }
        double v = 0.5 + 0.35 * s / norm + rng.uniform(-0.05, 0.05);
        out.at(y, x, c) = std::clamp(v, 0.05, 0.95);
      }
    }
  }
  return out;
}

Image random_uniform_image(int height, int width, int channels, SeededRng& rng,
                           double lo, double hi) {
  Image out(height, width, channels);
  for (double& v : out.data()) v = rng.uniform(lo, hi);
  return out;
}

}  // namespace spcx
