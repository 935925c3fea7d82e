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
#include <span>
#include <vector>

#include "features.h"
#include "image.h"

namespace spcx {

struct GeneratorSpec {
  int g = 3;             // group depth; one modulated stage per level
  int latent_dim = 16;
  int base = 4;          // spatial size of the first feature map
  int channels = 8;      // feature channels at every stage
  int out_channels = 3;
  int feature_dim = 32;  // length of the modulation feature M
  std::uint64_t seed = 0;

  void validate() const;
  int output_size() const { return base << g; }
};

struct ModulationPair {
  std::vector<double> alpha;  // per-channel scale
  std::vector<double> beta;   // per-channel shift
};

// levels[k-1] holds the 2^k pairs of group level k. Branch b at level k is
// produced from branch b/2 of level k-1 with pair b.
struct ModulationParams {
  std::vector<std::vector<ModulationPair>> levels;

  std::size_t pair_count() const;
  void validate(const GeneratorSpec& spec) const;
};

ModulationParams identity_modulation(const GeneratorSpec& spec);

// Small frozen convolutional pyramid. Each stage is nearest x2 upsampling
// followed by a 3x3 convolution (zero padding); the modulation and a
// leaky ReLU are applied per branch afterwards.
class ToyGenerator {
 public:
  explicit ToyGenerator(const GeneratorSpec& spec);

  const GeneratorSpec& spec() const { return spec_; }

  FeatureMap input_map(std::span<const double> latent) const;
  // Shared (unmodulated) part of stage `stage` in [0, g).
  FeatureMap stage_conv(int stage, const FeatureMap& in) const;
  FeatureMap modulate(const FeatureMap& f, const ModulationPair& pair) const;
  Image to_rgb(const FeatureMap& f) const;

 private:
  GeneratorSpec spec_;
  std::vector<double> input_weights_;
  std::vector<std::vector<double>> conv_weights_;  // [stage][o][i][3][3]
  std::vector<std::vector<double>> conv_bias_;
  std::vector<double> rgb_weights_;
  std::vector<double> rgb_bias_;
};

struct PseudoResultSet {
  std::vector<Image> outputs;
  Image mean;
  Image variance;  // per-element population variance over outputs
};

// Per-element mean and population variance. Identical outputs give exactly
// the common value and exactly zero variance.
std::pair<Image, Image> average_and_uncertainty(std::span<const Image> outputs);

// All 2^g pseudo results in one pass; each stage's convolution is evaluated
// once per parent branch and shared by its two children.
PseudoResultSet hpc_forward(const ToyGenerator& gen,
                            std::span<const double> latent,
                            const ModulationParams& mods);

// Fixed seeded affine head mapping a feature vector M to every modulation
// pair: alpha = 1 + tanh(W_a M) / 2, beta = W_b M (zero biases).
class ModulationHead {
 public:
  explicit ModulationHead(const GeneratorSpec& spec);
  ModulationParams encode(std::span<const double> feature) const;

 private:
  GeneratorSpec spec_;
  std::vector<double> alpha_weights_;
  std::vector<double> beta_weights_;
};

struct GeneratedSet {
  std::vector<double> latent;
  std::vector<double> feature;
  ModulationParams mods;
  PseudoResultSet results;
};

// Latent and modulation feature drawn from `latent_seed`, weights from
// spec.seed.
GeneratedSet generate_pseudo_results(const GeneratorSpec& spec,
                                     std::uint64_t latent_seed);

}  // namespace spcx
