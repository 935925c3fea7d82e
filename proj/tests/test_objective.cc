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
#include <vector>

#include "core/error.h"
#include "core/objective.h"
#include "core/pk.h"
#include "core/rng.h"
#include "doctest.h"
#include "oracles.h"

using spcx::ContextualConfig;
using spcx::Image;
using spcx::LossWeights;
using spcx::SeededRng;

namespace {

ContextualConfig rate2() {
  ContextualConfig cfg;
  cfg.rate = 2;
  return cfg;
}

std::vector<Image> noisy_copies(const Image& target, int n, SeededRng& rng) {
  std::vector<Image> out;
  for (int i = 0; i < n; ++i) {
    Image p = target;
    for (double& v : p.data()) v = std::clamp(v + rng.uniform(-0.2, 0.2), 0.05, 1.0);
    out.push_back(p);
  }
  return out;
}

double oracle_l1(const Image& a, const Image& b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a.data()[i] - b.data()[i]);
  return acc / a.size();
}

}  // namespace

TEST_CASE("l2 loss") {
  SeededRng rng(1);
  Image t = spcx::random_uniform_image(4, 4, 3, rng);
  std::vector<Image> one{t};
  CHECK(spcx::l2_loss(t, one) == 0.0);
  std::vector<Image> ones{Image(3, 3, 1, 1.0)};
  CHECK(spcx::l2_loss(Image(3, 3, 1, 0.0), ones) == 1.0);
  std::vector<Image> two{Image(2, 2, 3, 0.0), Image(2, 2, 3, 1.0)};
  CHECK(spcx::l2_loss(Image(2, 2, 3, 0.5), two) == 0.25);
  std::vector<Image> wrong{Image(2, 3, 3)};
  CHECK_THROWS_AS(spcx::l2_loss(Image(2, 2, 3), wrong), spcx::Error);
  CHECK_THROWS_AS(spcx::l2_loss(Image(2, 2, 3), std::vector<Image>{}), spcx::Error);
}

TEST_CASE("default weights") {
  LossWeights w;
  CHECK(w.adv == 1.0);
  CHECK(w.per == 0.1);
  CHECK(w.id == 10.0);
  w.per = -1;
  CHECK_THROWS_AS(w.validate(), spcx::Error);
}

TEST_CASE("spcx multi loss") {
  SeededRng rng(2);
  Image t = spcx::random_uniform_image(8, 8, 3, rng, 0.05, 1.0);
  std::vector<Image> same(4, t);
  CHECK(spcx::spcx_multi_loss(same, t, rate2()) <= 0.05);

  auto preds = noisy_copies(t, 4, rng);
  double direct = 0;
  for (const Image& p : preds) direct += oracle::spcx_block(t, p, 2);
  const double value = spcx::spcx_multi_loss(preds, t, rate2());
  CHECK(std::abs(value - direct / 4) < 1e-10);
  std::reverse(preds.begin(), preds.end());
  CHECK(std::abs(spcx::spcx_multi_loss(preds, t, rate2()) - value) < 1e-15);
}

TEST_CASE("l_rec matches a term-by-term oracle") {
  SeededRng rng(3);
  auto suite = spcx::make_objective_suite("identity", 17);
  for (int t = 0; t < 5; ++t) {
    Image target = spcx::random_uniform_image(8, 8, 3, rng, 0.05, 1.0);
    auto preds = noisy_copies(target, 8, rng);
    LossWeights w;
    auto b = spcx::l_rec(preds, target, rate2(), w, suite.models());
    double s = 0, adv = 0, l1 = 0;
    for (const Image& p : preds) {
      s += oracle::spcx_block(target, p, 2);
      adv += std::log(1.0 + std::exp(suite.discriminator.logit(p)));
      l1 += oracle_l1(target, p);
    }
    CHECK(std::abs(b.spcx - s / 8) < 1e-10);
    CHECK(std::abs(b.adv + 1.0 * adv / 8) < 1e-10);
    CHECK(std::abs(b.per - 0.1 * l1 / 8) < 1e-10);
    CHECK(std::abs(b.id - 10.0 * l1 / 8) < 1e-10);
    CHECK(std::abs(b.total - (s / 8 - adv / 8 + 10.1 * l1 / 8)) < 1e-10);
    CHECK(std::abs(b.total - (b.spcx + b.adv + b.per + b.id)) < 1e-12);
  }
}

TEST_CASE("l_rec is linear in each weight") {
  SeededRng rng(4);
  auto suite = spcx::make_objective_suite("random-projection", 5);
  Image target = spcx::random_texture(8, 8, 3, rng);
  auto preds = noisy_copies(target, 4, rng);
  LossWeights w;
  auto base = spcx::l_rec(preds, target, rate2(), w, suite.models());

  LossWeights w2 = w;
  w2.id *= 2;
  auto b = spcx::l_rec(preds, target, rate2(), w2, suite.models());
  CHECK(b.id == 2 * base.id);
  CHECK(b.spcx == base.spcx);
  CHECK(b.adv == base.adv);
  CHECK(b.per == base.per);

  w2 = w;
  w2.per *= 3;
  b = spcx::l_rec(preds, target, rate2(), w2, suite.models());
  CHECK(std::abs(b.per - 3 * base.per) <= 1e-15 * std::abs(base.per));
  CHECK(b.id == base.id);

  w2 = w;
  w2.adv *= 2;
  b = spcx::l_rec(preds, target, rate2(), w2, suite.models());
  CHECK(b.adv == 2 * base.adv);
  CHECK(b.per == base.per);
  CHECK(std::abs(b.total - (b.spcx + b.adv + b.per + b.id)) < 1e-12);
}

TEST_CASE("l_rec reduces to self distance with zero weights") {
  SeededRng rng(5);
  auto suite = spcx::make_objective_suite("identity", 1);
  Image target = spcx::random_uniform_image(8, 8, 1, rng, 0.05, 1.0);
  std::vector<Image> preds{target};
  LossWeights zero{0, 0, 0};
  auto b = spcx::l_rec(preds, target, rate2(), zero, suite.models());
  CHECK(b.total == spcx::spcx(target, target, rate2()));
  CHECK(b.total <= 0.05);
}

TEST_CASE("l_rec is symmetric over the prediction set") {
  SeededRng rng(6);
  auto suite = spcx::make_objective_suite("random-projection", 2);
  Image target = spcx::random_texture(8, 8, 3, rng);
  auto preds = noisy_copies(target, 6, rng);
  auto a = spcx::l_rec(preds, target, rate2(), {}, suite.models());
  std::rotate(preds.begin(), preds.begin() + 2, preds.end());
  auto b = spcx::l_rec(preds, target, rate2(), {}, suite.models());
  CHECK(std::abs(a.total - b.total) < 1e-12);
}

TEST_CASE("l_rec errors name the term") {
  auto suite = spcx::make_objective_suite("identity", 1);
  Image target(8, 8, 1, 0.5);
  std::vector<Image> zero{Image(8, 8, 1, 0.0)};
  CHECK_THROWS_WITH_AS(spcx::l_rec(zero, target, rate2(), {}, suite.models()),
                       doctest::Contains("spcx term"), spcx::Error);
  std::vector<Image> wrong{Image(4, 4, 1, 0.5)};
  CHECK_THROWS_AS(spcx::l_rec(wrong, target, rate2(), {}, suite.models()), spcx::Error);
  CHECK_THROWS_AS(spcx::make_objective_suite("vgg", 1), spcx::Error);
}

TEST_CASE("extractors and discriminator are deterministic") {
  SeededRng rng(7);
  Image img = spcx::random_texture(8, 8, 3, rng);
  spcx::RandomProjectionExtractor a(3), b(3), c(4);
  auto fa = a.extract(img), fb = b.extract(img), fc = c.extract(img);
  REQUIRE(fa.size() == 2);
  CHECK(fa[0].channels == 8);
  CHECK(fa[1].height == 4);
  CHECK(fa[0].values == fb[0].values);
  CHECK(fa[1].values == fb[1].values);
  CHECK(fa[0].values != fc[0].values);
  spcx::DiscriminatorStub d(9);
  CHECK(d.logit(img) == spcx::DiscriminatorStub(9).logit(img));
  CHECK(std::abs(spcx::softplus(0.0) - std::log(2.0)) < 1e-15);
  CHECK(spcx::softplus(800.0) == 800.0);
  CHECK(spcx::softplus(-800.0) >= 0.0);
}
