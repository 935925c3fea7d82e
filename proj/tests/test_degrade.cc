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

#include <algorithm>
#include <cmath>

#include "core/degrade.h"
#include "core/error.h"
#include "core/metrics.h"
#include "core/rng.h"
#include "doctest.h"
#include "oracles.h"

using spcx::DegradationConfig;
using spcx::DisplacementField;
using spcx::Image;
using spcx::SeededRng;

namespace {

Image ramp(int h, int w) {
  Image img(h, w, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(y, x, 0) = x / double(w - 1);
  return img;
}

DisplacementField constant_field(int h, int w, double dx, double dy) {
  const std::size_t n = std::size_t(h) * w;
  return {h, w, std::vector<double>(n, dx), std::vector<double>(n, dy)};
}

// Field built by the definition: U(-1,1) draws (all dx, then all dy), full
// 2-D Gaussian smoothing, times alpha.
DisplacementField oracle_field(int h, int w, double alpha, double sigma,
                               SeededRng rng) {
  DisplacementField f{h, w, {}, {}};
  for (int i = 0; i < h * w; ++i) f.dx.push_back(rng.uniform(-1.0, 1.0));
  for (int i = 0; i < h * w; ++i) f.dy.push_back(rng.uniform(-1.0, 1.0));
  f.dx = oracle::blur2d(f.dx, h, w, sigma);
  f.dy = oracle::blur2d(f.dy, h, w, sigma);
  for (double& v : f.dx) v *= alpha;
  for (double& v : f.dy) v *= alpha;
  return f;
}

}  // namespace

TEST_CASE("elastic field") {
  SUBCASE("zero alpha gives a zero field") {
    SeededRng rng(3);
    auto f = spcx::make_elastic_field(16, 16, 0.0, 4.0, rng);
    CHECK(f.max_magnitude() == 0.0);
  }
  SUBCASE("deterministic per seed") {
    SeededRng a(9), b(9);
    auto fa = spcx::make_elastic_field(32, 24, 5.0, 2.0, a);
    auto fb = spcx::make_elastic_field(32, 24, 5.0, 2.0, b);
    CHECK(fa.dx == fb.dx);
    CHECK(fa.dy == fb.dy);
  }
  SUBCASE("mean displacement matches the smoothing oracle") {
    SeededRng rng(7);
    auto f = spcx::make_elastic_field(128, 128, 10.0, 4.0, rng);
    auto o = oracle_field(128, 128, 10.0, 4.0, SeededRng(7));
    double mf = 0, mo = 0;
    for (std::size_t i = 0; i < f.dx.size(); ++i) {
      mf += std::hypot(f.dx[i], f.dy[i]);
      mo += std::hypot(o.dx[i], o.dy[i]);
      CHECK(std::abs(f.dx[i] - o.dx[i]) < 1e-12);
    }
    CHECK(std::abs(mf - mo) / f.dx.size() < 1e-12);
    CHECK(mf / f.dx.size() > 0.0);
  }
  SUBCASE("components stay within alpha") {
    SeededRng rng(11);
    auto f = spcx::make_elastic_field(40, 40, 3.0, 1.5, rng);
    for (std::size_t i = 0; i < f.dx.size(); ++i) {
      CHECK(std::abs(f.dx[i]) <= 3.0);
      CHECK(std::abs(f.dy[i]) <= 3.0);
    }
    CHECK(f.max_magnitude() <= std::sqrt(2.0) * 3.0);
  }
  SUBCASE("negative parameters rejected") {
    SeededRng rng(1);
    CHECK_THROWS_AS(spcx::make_elastic_field(4, 4, -1.0, 1.0, rng), spcx::Error);
  }
}

TEST_CASE("warp") {
  SUBCASE("zero field is the identity") {
    SeededRng rng(2);
    Image img = spcx::random_uniform_image(9, 7, 3, rng);
    CHECK(spcx::warp(img, constant_field(9, 7, 0, 0)) == img);
  }
  SUBCASE("unit shift on a ramp") {
    Image img = ramp(3, 5);
    Image out = spcx::warp(img, constant_field(3, 5, 1.0, 0.0));
    for (int y = 0; y < 3; ++y) {
      for (int x = 0; x < 4; ++x) CHECK(out.at(y, x, 0) == img.at(y, x + 1, 0));
      CHECK(out.at(y, 4, 0) == 1.0);
    }
  }
  SUBCASE("half shift interpolates midpoints") {
    Image img = ramp(2, 5);
    Image out = spcx::warp(img, constant_field(2, 5, 0.5, 0.0));
    for (int x = 0; x < 4; ++x)
      CHECK(out.at(0, x, 0) == doctest::Approx((x + 0.5) / 4.0).epsilon(1e-15));
    CHECK(out.at(1, 4, 0) == 1.0);
  }
  SUBCASE("random field matches bilinear oracle") {
    SeededRng rng(5);
    Image img = spcx::random_uniform_image(12, 10, 3, rng);
    auto f = spcx::make_elastic_field(12, 10, 4.0, 1.0, rng);
    Image out = spcx::warp(img, f);
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 10; ++x)
        for (int c = 0; c < 3; ++c) {
          const std::size_t p = std::size_t(y) * 10 + x;
          CHECK(std::abs(out.at(y, x, c) -
                         oracle::bilinear(img, x + f.dx[p], y + f.dy[p], c)) < 1e-14);
        }
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(spcx::warp(Image(4, 4, 1), constant_field(4, 5, 0, 0)),
                    spcx::Error);
  }
}

TEST_CASE("gaussian blur") {
  SeededRng rng(8);
  Image img = spcx::random_uniform_image(16, 13, 3, rng);
  CHECK(spcx::gaussian_blur(img, 0.0) == img);

  Image flat(10, 10, 3, 0.37);
  Image blurred = spcx::gaussian_blur(flat, 2.0);
  for (double v : blurred.data()) CHECK(std::abs(v - 0.37) < 1e-12);

  Image impulse(15, 15, 1, 0.0);
  impulse.at(7, 7, 0) = 1.0;
  const auto taps = oracle::gaussian_taps(1.0);
  CHECK(spcx::gaussian_blur(impulse, 1.0).at(7, 7, 0) ==
        doctest::Approx(taps[3] * taps[3]).epsilon(1e-14));
  CHECK(spcx::gaussian_kernel(1.0).size() == 7);

  for (double sigma : {0.5, 1.0, 2.5}) {
    Image out = spcx::gaussian_blur(img, sigma);
    Image ref = oracle::blur_image(img, sigma);
    const double in_max = *std::max_element(img.data().begin(), img.data().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(std::abs(out.data()[i] - ref.data()[i]) < 1e-12);
      CHECK(out.data()[i] <= in_max + 1e-15);
    }
  }
  CHECK_THROWS_AS(spcx::gaussian_blur(img, -1.0), spcx::Error);
}

TEST_CASE("degrade pipeline") {
  SeededRng rng(4);
  Image img = spcx::random_texture(48, 48, 3, rng);

  CHECK(spcx::degrade(img, DegradationConfig{}) == img);

  DegradationConfig cfg;
  cfg.elastic_alpha = 8;
  cfg.elastic_sigma = 4;
  cfg.blur_sigma = 2;
  cfg.noise_std = 0.01;
  cfg.seed = 77;
  Image a = spcx::degrade(img, cfg);
  CHECK(spcx::degrade(img, cfg) == a);
  for (double v : a.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  // Oracle pipeline rebuilt from the definition.
  SeededRng root(77);
  Image ref = oracle::blur_image(img, 2.0);
  auto f = oracle_field(48, 48, 8.0, 4.0, root.fork("elastic"));
  Image warped(48, 48, 3);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 48; ++x)
      for (int c = 0; c < 3; ++c) {
        const std::size_t p = std::size_t(y) * 48 + x;
        warped.at(y, x, c) = oracle::bilinear(ref, x + f.dx[p], y + f.dy[p], c);
      }
  SeededRng noise = root.fork("noise");
  for (double& v : warped.data()) v = std::clamp(v + 0.01 * noise.normal(), 0.0, 1.0);
  const double expected = 10.0 * std::log10(1.0 / oracle::mse(img, warped));
  CHECK(std::abs(spcx::psnr(img, a) - expected) < 1e-9);

  cfg.seed = 78;
  CHECK_FALSE(spcx::degrade(img, cfg) == a);

  cfg.seed = 77;
  cfg.order = spcx::DegradeOrder::kWarpThenBlur;
  CHECK_FALSE(spcx::degrade(img, cfg) == a);
}

TEST_CASE("degradation config") {
  auto d = DegradationConfig::defaults_for(512, 3);
  CHECK(d.elastic_alpha == 34.0);
  CHECK(d.elastic_sigma == 4.0);
  CHECK(d.blur_sigma == 3.0);
  CHECK(d.noise_std == 0.01);
  auto s = DegradationConfig::defaults_for(128);
  CHECK(s.elastic_alpha == 8.5);
  CHECK(s.blur_sigma == 0.75);
  CHECK(s.noise_std == 0.01);

  DegradationConfig bad;
  bad.elastic_alpha = 1.0;
  CHECK_THROWS_AS(bad.validate(), spcx::Error);
  bad.elastic_sigma = 1.0;
  CHECK_NOTHROW(bad.validate());
  bad.noise_std = -0.1;
  CHECK_THROWS_AS(bad.validate(), spcx::Error);

  CHECK(spcx::parse_degrade_order("warp-blur") == spcx::DegradeOrder::kWarpThenBlur);
  CHECK_THROWS_AS(spcx::parse_degrade_order("sideways"), spcx::Error);
}

TEST_CASE("ssim does not rise with blur") {
  for (std::uint64_t seed : {1, 2, 3}) {
    SeededRng rng(seed);
    Image img = spcx::random_texture(48, 48, 1, rng);
    double prev = 2.0;
    for (double blur : {0.0, 1.0, 2.0, 3.0}) {
      DegradationConfig cfg;
      cfg.elastic_alpha = 1.0;
      cfg.elastic_sigma = 4.0;
      cfg.blur_sigma = blur;
      cfg.noise_std = 0.01;
      cfg.seed = seed;
      const double s = spcx::ssim(img, spcx::degrade(img, cfg));
      CHECK(s <= prev);
      prev = s;
    }
  }
}
