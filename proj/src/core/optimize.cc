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

#include "optimize.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "error.h"

namespace spcx {

const char* to_string(PixelLoss loss) {
  return loss == PixelLoss::kSpcx ? "spcx" : "l2";
}

PixelLoss parse_pixel_loss(const std::string& name) {
  if (name == "spcx") return PixelLoss::kSpcx;
  if (name == "l2") return PixelLoss::kL2;
  fail(ErrorCode::kInvalidArgument,
       "unknown loss '" + name + "' (expected spcx|l2)");
}

void OptimizeConfig::validate() const {
  require(steps >= 1, ErrorCode::kInvalidArgument, "steps must be >= 1");
  require(step_size > 0.0 && std::isfinite(step_size),
          ErrorCode::kInvalidArgument, "step size must be positive");
  require(log_every >= 1, ErrorCode::kInvalidArgument,
          "log_every must be >= 1");
  require(max_halvings >= 0, ErrorCode::kInvalidArgument,
          "max_halvings must be >= 0");
  if (loss == PixelLoss::kSpcx) contextual.validate();
}

std::pair<double, Image> pixel_objective(const Image& x, const Image& target,
                                         const OptimizeConfig& cfg) {
  require_same_shape(x, target, "optimize");
  if (cfg.loss == PixelLoss::kSpcx) {
    return spcx_value_and_grad(x, target, cfg.contextual);
  }
  Image grad(x.height(), x.width(), x.channels());
  auto a = x.data(), b = target.data();
  auto g = grad.data();
  const double n = static_cast<double>(a.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
    g[i] = 2.0 * d / n;
  }
  return {acc / n, std::move(grad)};
}

namespace {

double objective_value(const Image& x, const Image& target,
                       const OptimizeConfig& cfg) {
  if (cfg.loss == PixelLoss::kSpcx) return spcx(x, target, cfg.contextual);
  return pixel_objective(x, target, cfg).first;
}

void check_finite(double v, int step) {
  require(std::isfinite(v), ErrorCode::kNumeric,
          "loss diverged (non-finite) at step " + std::to_string(step));
}

}  // namespace

OptimizeResult optimize_image(const Image& init, const Image& target,
                              const OptimizeConfig& cfg) {
  cfg.validate();
  require_same_shape(init, target, "optimize");

  OptimizeResult result;
  Image x = init;
  double lr = cfg.step_size;
  auto [loss, grad] = pixel_objective(x, target, cfg);
  check_finite(loss, 0);
  result.trace.push_back({0, loss, lr});

  for (int step = 1; step <= cfg.steps; ++step) {
    bool moved = false;
    for (int attempt = 0; attempt <= cfg.max_halvings; ++attempt) {
      Image candidate = x;
      auto c = candidate.data();
      auto g = grad.data();
      for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = std::clamp(c[i] - lr * g[i], 0.0, 1.0);
      }
      double next;
      try {
        next = objective_value(candidate, target, cfg);
      } catch (const Error& e) {
        // A clamp can zero a whole sub-image; treat that step as too long.
        if (e.code() != ErrorCode::kDegenerate) throw;
        lr *= 0.5;
        continue;
      }
      check_finite(next, step);
      if (next <= loss) {
        x = std::move(candidate);
        moved = true;
        break;
      }
      lr *= 0.5;
    }
    if (moved) {
      std::tie(loss, grad) = pixel_objective(x, target, cfg);
      check_finite(loss, step);
    }
    result.steps_taken = step;
    if (step % cfg.log_every == 0 || step == cfg.steps || !moved) {
      result.trace.push_back({step, loss, lr});
    }
    if (!moved) break;
  }
  result.image = std::move(x);
  return result;
}

}  // namespace spcx
