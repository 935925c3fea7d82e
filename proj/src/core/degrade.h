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
#include <string>
#include <vector>

#include "image.h"
#include "rng.h"

namespace spcx {

enum class DegradeOrder { kBlurThenWarp = 0, kWarpThenBlur = 1 };

const char* to_string(DegradeOrder order);
DegradeOrder parse_degrade_order(const std::string& name);

struct DegradationConfig {
  double elastic_alpha = 0.0;  // displacement magnitude, pixels
  double elastic_sigma = 0.0;  // smoothing std of the displacement noise
  double blur_sigma = 0.0;     // PSF std, pixels
  double noise_std = 0.0;      // additive Gaussian noise, intensity units
  std::uint64_t seed = 0;
  DegradeOrder order = DegradeOrder::kBlurThenWarp;

  void validate() const;

  // Declared defaults for a 512 px image (alpha 34, sigma 4, blur 3,
  // noise 0.01) with the spatial parameters scaled linearly to `size`.
  static DegradationConfig defaults_for(int size, std::uint64_t seed = 0);
};

// Per-pixel (dx, dy) offsets. Each component is alpha times a normalized
// Gaussian average of U(-1,1) noise, so |dx|, |dy| <= alpha and the vector
// magnitude is at most sqrt(2) * alpha. sigma == 0 skips the smoothing.
struct DisplacementField {
  int height = 0;
  int width = 0;
  std::vector<double> dx;
  std::vector<double> dy;

  double max_magnitude() const;
};

// Normalized discrete Gaussian truncated at +-ceil(3 sigma). sigma > 0.
std::vector<double> gaussian_kernel(double sigma);

DisplacementField make_elastic_field(int height, int width, double alpha,
                                     double sigma, SeededRng& rng);

// Bilinear resampling at (x + dx, y + dy), sample coordinates clamped to the
// image. A zero field reproduces the input bit-exactly.
Image warp(const Image& img, const DisplacementField& field);

// Separable Gaussian with reflect-101 borders. sigma == 0 is the identity.
Image gaussian_blur(const Image& img, double sigma);

// clamp(T(I) + n) with T = warp o blur (or blur o warp), n ~ N(0, noise_std^2).
// Noise pushed out of [0,1] is clipped, not redrawn.
Image degrade(const Image& img, const DegradationConfig& cfg);

}  // namespace spcx
