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
#include <memory>
#include <span>
#include <string>

#include "contextual.h"
#include "features.h"
#include "image.h"

namespace spcx {

struct LossWeights {
  double adv = 1.0;
  double per = 0.1;
  double id = 10.0;

  void validate() const;
};

// Weighted per-term contributions; total == spcx + adv + per + id.
struct LossBreakdown {
  double spcx = 0.0;
  double adv = 0.0;  // -lambda_adv * mean softplus(D(pred_i))
  double per = 0.0;  // lambda_per * mean L1 feature distance (phi)
  double id = 0.0;   // lambda_id * mean L1 feature distance (eta)
  double total = 0.0;
};

// (1/n) sum_i ||pred - target_i||^2 / (H W C).
double l2_loss(const Image& pred, std::span<const Image> targets);

// Mean element-wise absolute difference over all feature maps.
double feature_l1(const FeatureExtractor& extractor, const Image& a,
                  const Image& b);

double softplus(double x);

// Mean of spcx(pred_i, target) over the set.
double spcx_multi_loss(std::span<const Image> preds, const Image& target,
                       const ContextualConfig& cfg);

struct ObjectiveModels {
  const FeatureExtractor& perceptual;
  const FeatureExtractor& identity;
  const DiscriminatorStub& discriminator;
};

// Owns a perceptual/identity extractor pair and a discriminator whose seeds
// are derived from one model seed.
struct ObjectiveSuite {
  std::unique_ptr<FeatureExtractor> perceptual;
  std::unique_ptr<FeatureExtractor> identity;
  DiscriminatorStub discriminator;

  ObjectiveModels models() const {
    return {*perceptual, *identity, discriminator};
  }
};

ObjectiveSuite make_objective_suite(const std::string& extractor_kind,
                                    std::uint64_t seed);

LossBreakdown l_rec(std::span<const Image> preds, const Image& target,
                    const ContextualConfig& cfg, const LossWeights& weights,
                    const ObjectiveModels& models);

}  // namespace spcx
