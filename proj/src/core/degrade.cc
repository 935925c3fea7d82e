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

#include "degrade.h"

#include <algorithm>
#include <cmath>

#include "error.h"

namespace spcx {

namespace {

int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

// Blurs one strided plane in place: element (y, x) lives at
// data[(y * width + x) * stride + offset].
void blur_plane(std::vector<double>& data, int height, int width, int stride,
                int offset, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> tmp(static_cast<std::size_t>(height) * width);
  auto at = [&](int y, int x) -> double& {
    return data[(static_cast<std::size_t>(y) * width + x) * stride + offset];
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * at(y, reflect101(x + k, width));
      }
      tmp[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] *
               tmp[static_cast<std::size_t>(reflect101(y + k, height)) * width + x];
      }
      at(y, x) = acc;
    }
  }
}

}  // namespace

const char* to_string(DegradeOrder order) {
  return order == DegradeOrder::kBlurThenWarp ? "blur-warp" : "warp-blur";
}

DegradeOrder parse_degrade_order(const std::string& name) {
  if (name == "blur-warp") return DegradeOrder::kBlurThenWarp;
  if (name == "warp-blur") return DegradeOrder::kWarpThenBlur;
  fail(ErrorCode::kInvalidArgument,
       "unknown order '" + name + "' (expected blur-warp|warp-blur)");
}

void DegradationConfig::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  require(ok(elastic_alpha), ErrorCode::kInvalidArgument,
          "elastic alpha must be finite and >= 0");
  require(ok(elastic_sigma), ErrorCode::kInvalidArgument,
          "elastic sigma must be finite and >= 0");
  require(ok(blur_sigma), ErrorCode::kInvalidArgument,
          "blur sigma must be finite and >= 0");
  require(ok(noise_std), ErrorCode::kInvalidArgument,
          "noise std must be finite and >= 0");
  require(elastic_alpha == 0.0 || elastic_sigma > 0.0,
          ErrorCode::kInvalidArgument,
          "elastic sigma must be > 0 when alpha > 0");
}

DegradationConfig DegradationConfig::defaults_for(int size,
                                                  std::uint64_t seed) {
  const double s = size / 512.0;
  DegradationConfig cfg;
  cfg.elastic_alpha = 34.0 * s;
  cfg.elastic_sigma = 4.0 * s;
  cfg.blur_sigma = 3.0 * s;
  cfg.noise_std = 0.01;
  cfg.seed = seed;
  return cfg;
}

double DisplacementField::max_magnitude() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    m = std::max(m, std::hypot(dx[i], dy[i]));
  }
  return m;
}

std::vector<double> gaussian_kernel(double sigma) {
  require(sigma > 0.0, ErrorCode::kInvalidArgument,
          "Gaussian kernel needs sigma > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += k[i + radius];
  }
  for (double& v : k) v /= total;
  return k;
}

DisplacementField make_elastic_field(int height, int width, double alpha,
                                     double sigma, SeededRng& rng) {
  require(height > 0 && width > 0, ErrorCode::kInvalidArgument,
          "field dimensions must be positive");
  require(alpha >= 0.0 && sigma >= 0.0, ErrorCode::kInvalidArgument,
          "elastic alpha and sigma must be >= 0");
  const std::size_t n = static_cast<std::size_t>(height) * width;
  DisplacementField f{height, width, std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0)};
  if (alpha == 0.0) return f;
  for (double& v : f.dx) v = rng.uniform(-1.0, 1.0);
  for (double& v : f.dy) v = rng.uniform(-1.0, 1.0);
  if (sigma > 0.0) {
    const auto kernel = gaussian_kernel(sigma);
    blur_plane(f.dx, height, width, 1, 0, kernel);
    blur_plane(f.dy, height, width, 1, 0, kernel);
  }
  for (double& v : f.dx) v *= alpha;
  for (double& v : f.dy) v *= alpha;
  return f;
}

Image warp(const Image& img, const DisplacementField& field) {
  require(field.height == img.height() && field.width == img.width(),
          ErrorCode::kShapeMismatch, "displacement field does not match image");
  const int h = img.height(), w = img.width(), ch = img.channels();
  Image out(h, w, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      const double sx = std::clamp(x + field.dx[p], 0.0, w - 1.0);
      const double sy = std::clamp(y + field.dy[p], 0.0, h - 1.0);
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - x0, fy = sy - y0;
      for (int c = 0; c < ch; ++c) {
        const double top = (1.0 - fx) * img.at(y0, x0, c) + fx * img.at(y0, x1, c);
        const double bot = (1.0 - fx) * img.at(y1, x0, c) + fx * img.at(y1, x1, c);
        out.at(y, x, c) = (1.0 - fy) * top + fy * bot;
      }
    }
  }
  return out;
}

Image gaussian_blur(const Image& img, double sigma) {
  require(sigma >= 0.0 && std::isfinite(sigma), ErrorCode::kInvalidArgument,
          "blur sigma must be finite and >= 0");
  if (sigma == 0.0) return img;
  const auto kernel = gaussian_kernel(sigma);
  std::vector<double> data = img.values();
  for (int c = 0; c < img.channels(); ++c) {
    blur_plane(data, img.height(), img.width(), img.channels(), c, kernel);
  }
  return Image(img.height(), img.width(), img.channels(), std::move(data));
}

Image degrade(const Image& img, const DegradationConfig& cfg) {
  cfg.validate();
  SeededRng root(cfg.seed);
  SeededRng field_rng = root.fork("elastic");
  const auto field = make_elastic_field(img.height(), img.width(),
                                        cfg.elastic_alpha, cfg.elastic_sigma,
                                        field_rng);
  Image out = cfg.order == DegradeOrder::kBlurThenWarp
                  ? warp(gaussian_blur(img, cfg.blur_sigma), field)
                  : gaussian_blur(warp(img, field), cfg.blur_sigma);
  if (cfg.noise_std > 0.0) {
    SeededRng noise_rng = root.fork("noise");
    for (double& v : out.data()) v += cfg.noise_std * noise_rng.normal();
  }
  return clamp01(std::move(out));
}

}  // namespace spcx
