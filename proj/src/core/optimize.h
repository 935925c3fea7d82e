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

#include "contextual.h"
#include "image.h"

namespace spcx {

enum class PixelLoss { kSpcx = 0, kL2 = 1 };

const char* to_string(PixelLoss loss);
PixelLoss parse_pixel_loss(const std::string& name);

struct OptimizeConfig {
  PixelLoss loss = PixelLoss::kSpcx;
  int steps = 200;
  double step_size = 1.0;
  ContextualConfig contextual;
  std::uint64_t seed = 0;  // only used to draw a random initial image
  int log_every = 1;
  int max_halvings = 40;

  void validate() const;
};

struct TracePoint {
  int step = 0;
  double loss = 0.0;
  double step_size = 0.0;
};

struct OptimizeResult {
  Image image;
  std::vector<TracePoint> trace;
  int steps_taken = 0;
};

// Objective value and gradient with respect to `x`. SPCX uses spcx(x, target).
std::pair<double, Image> pixel_objective(const Image& x, const Image& target,
                                         const OptimizeConfig& cfg);

// Projected gradient descent on the pixels of `init`, clamping to [0,1] after
// every step. A step that would raise the loss is retried with half the step
// size (the reduction persists); when no reduction within max_halvings helps,
// the iterate is kept. The recorded trace is therefore non-increasing.
OptimizeResult optimize_image(const Image& init, const Image& target,
                              const OptimizeConfig& cfg);

}  // namespace spcx
