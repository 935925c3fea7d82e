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
#include <string>
#include <vector>

#include "contextual.h"
#include "image.h"

namespace spcx {

// Feature map with an arbitrary channel count, laid out like Image.
struct FeatureMap {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> values;

  PointsView points() const {
    return {values, static_cast<std::size_t>(height) * width,
            static_cast<std::size_t>(channels)};
  }
};

// Stand-in for the perceptual and identity networks. Implementations must be
// deterministic and produce a fixed number of maps per instance.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string name() const = 0;
  virtual std::vector<FeatureMap> extract(const Image& img) const = 0;
};

class IdentityExtractor final : public FeatureExtractor {
 public:
  std::string name() const override { return "identity"; }
  std::vector<FeatureMap> extract(const Image& img) const override;
};

// Average-pool by each scale, then a fixed seeded per-pixel linear map to
// `out_channels` features.
class RandomProjectionExtractor final : public FeatureExtractor {
 public:
  explicit RandomProjectionExtractor(std::uint64_t seed, int out_channels = 8,
                                     std::vector<int> scales = {1, 2});
  std::string name() const override { return "random-projection"; }
  std::vector<FeatureMap> extract(const Image& img) const override;

 private:
  std::uint64_t seed_;
  int out_channels_;
  std::vector<int> scales_;
};

std::unique_ptr<FeatureExtractor> make_extractor(const std::string& kind,
                                                 std::uint64_t seed);

// Frozen linear critic: logit = b + sum_p w_p * x_p with seeded weights drawn
// per input size.
class DiscriminatorStub {
 public:
  explicit DiscriminatorStub(std::uint64_t seed) : seed_(seed) {}
  double logit(const Image& img) const;

 private:
  std::uint64_t seed_;
};

}  // namespace spcx
