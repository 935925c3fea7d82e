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

#include "objective.h"

#include <cmath>
#include <string>

#include "error.h"
#include "rng.h"

namespace spcx {

namespace {

void require_preds(std::span<const Image> preds, const Image& target,
                   const char* what) {
  require(!preds.empty(), ErrorCode::kInvalidArgument,
          std::string(what) + ": empty prediction set");
  for (const Image& p : preds) require_same_shape(p, target, what);
}

// Re-throws with the failing term named.
template <typename Fn>
double term(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + " term: " + e.what());
  }
}

}  // namespace

void LossWeights::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  require(ok(adv) && ok(per) && ok(id), ErrorCode::kInvalidArgument,
          "loss weights must be finite and >= 0");
}

double l2_loss(const Image& pred, std::span<const Image> targets) {
  require(!targets.empty(), ErrorCode::kInvalidArgument,
          "l2 loss needs at least one target");
  double total = 0.0;
  for (const Image& t : targets) {
    require_same_shape(pred, t, "l2 loss");
    double acc = 0.0;
    auto a = pred.data(), b = t.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    total += acc / static_cast<double>(a.size());
  }
  return total / static_cast<double>(targets.size());
}

double feature_l1(const FeatureExtractor& extractor, const Image& a,
                  const Image& b) {
  const auto fa = extractor.extract(a);
  const auto fb = extractor.extract(b);
  require(fa.size() == fb.size(), ErrorCode::kShapeMismatch,
          "feature map count differs");
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < fa.size(); ++k) {
    require(fa[k].values.size() == fb[k].values.size(),
            ErrorCode::kShapeMismatch, "feature map sizes differ");
    for (std::size_t i = 0; i < fa[k].values.size(); ++i) {
      acc += std::abs(fa[k].values[i] - fb[k].values[i]);
    }
    count += fa[k].values.size();
  }
  require(count > 0, ErrorCode::kShapeMismatch, "extractor produced no features");
  return acc / static_cast<double>(count);
}

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double spcx_multi_loss(std::span<const Image> preds, const Image& target,
                       const ContextualConfig& cfg) {
  require_preds(preds, target, "spcx multi loss");
  double acc = 0.0;
  for (const Image& p : preds) acc += spcx(target, p, cfg);
  return acc / static_cast<double>(preds.size());
}

ObjectiveSuite make_objective_suite(const std::string& extractor_kind,
                                    std::uint64_t seed) {
  SeededRng root(seed);
  return ObjectiveSuite{
      make_extractor(extractor_kind, root.fork("perceptual").seed()),
      make_extractor(extractor_kind, root.fork("identity").seed()),
      DiscriminatorStub(root.fork("discriminator").seed())};
}

LossBreakdown l_rec(std::span<const Image> preds, const Image& target,
                    const ContextualConfig& cfg, const LossWeights& weights,
                    const ObjectiveModels& models) {
  weights.validate();
  require_preds(preds, target, "reconstruction loss");
  const double n = static_cast<double>(preds.size());
  double s = 0.0, adv = 0.0, per = 0.0, id = 0.0;
  for (const Image& p : preds) {
    s += term("spcx", [&] { return spcx(target, p, cfg); });
    adv += term("adv", [&] { return softplus(models.discriminator.logit(p)); });
    per += term("per", [&] { return feature_l1(models.perceptual, target, p); });
    id += term("id", [&] { return feature_l1(models.identity, target, p); });
  }
  LossBreakdown out;
  out.spcx = s / n;
  out.adv = -weights.adv * (adv / n);
  out.per = weights.per * (per / n);
  out.id = weights.id * (id / n);
  out.total = out.spcx + out.adv + out.per + out.id;
  return out;
}

}  // namespace spcx
