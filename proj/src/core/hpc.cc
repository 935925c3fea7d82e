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

#include "hpc.h"

#include <cmath>
#include <string>

#include "error.h"
#include "rng.h"

namespace spcx {

namespace {

constexpr double kLeak = 0.2;
constexpr double kAlphaGain = 0.5;
constexpr double kBetaGain = 0.2;

std::vector<double> normal_weights(SeededRng& rng, std::size_t n,
                                   double scale) {
  std::vector<double> w(n);
  for (double& v : w) v = rng.normal() * scale;
  return w;
}

}  // namespace

void GeneratorSpec::validate() const {
  require(g >= 1 && g <= 6, ErrorCode::kInvalidArgument,
          "group depth g must be in [1, 6], got " + std::to_string(g));
  require(latent_dim >= 1 && base >= 1 && channels >= 1 && feature_dim >= 1,
          ErrorCode::kInvalidArgument, "generator sizes must be positive");
  require(out_channels == 1 || out_channels == 3, ErrorCode::kInvalidArgument,
          "generator output must have 1 or 3 channels");
}

std::size_t ModulationParams::pair_count() const {
  std::size_t n = 0;
  for (const auto& level : levels) n += level.size();
  return n;
}

void ModulationParams::validate(const GeneratorSpec& spec) const {
  require(levels.size() == static_cast<std::size_t>(spec.g),
          ErrorCode::kShapeMismatch,
          "modulation has " + std::to_string(levels.size()) +
              " levels, generator has g = " + std::to_string(spec.g));
  for (std::size_t k = 0; k < levels.size(); ++k) {
    require(levels[k].size() == (std::size_t{2} << k),
            ErrorCode::kShapeMismatch,
            "level " + std::to_string(k + 1) + " must hold " +
                std::to_string(std::size_t{2} << k) + " pairs");
    for (const auto& p : levels[k]) {
      require(p.alpha.size() == static_cast<std::size_t>(spec.channels) &&
                  p.beta.size() == static_cast<std::size_t>(spec.channels),
              ErrorCode::kShapeMismatch,
              "modulation vectors must match the channel count");
    }
  }
}

ModulationParams identity_modulation(const GeneratorSpec& spec) {
  spec.validate();
  ModulationParams mods;
  for (int k = 1; k <= spec.g; ++k) {
    mods.levels.emplace_back(
        std::size_t{1} << k,
        ModulationPair{std::vector<double>(spec.channels, 1.0),
                       std::vector<double>(spec.channels, 0.0)});
  }
  return mods;
}

ToyGenerator::ToyGenerator(const GeneratorSpec& spec) : spec_(spec) {
  spec_.validate();
  SeededRng rng = SeededRng(spec_.seed).fork("generator");
  const std::size_t c = spec_.channels;
  const std::size_t base_n =
      static_cast<std::size_t>(spec_.base) * spec_.base * c;
  input_weights_ = normal_weights(rng, base_n * spec_.latent_dim,
                                  1.0 / std::sqrt(spec_.latent_dim));
  const double conv_scale = std::sqrt(2.0 / (9.0 * c));
  for (int s = 0; s < spec_.g; ++s) {
    conv_weights_.push_back(normal_weights(rng, c * c * 9, conv_scale));
    conv_bias_.push_back(normal_weights(rng, c, 0.05));
  }
  rgb_weights_ = normal_weights(rng, spec_.out_channels * c,
                                1.0 / std::sqrt(static_cast<double>(c)));
  rgb_bias_.assign(spec_.out_channels, 0.0);
}

FeatureMap ToyGenerator::input_map(std::span<const double> latent) const {
  require(latent.size() == static_cast<std::size_t>(spec_.latent_dim),
          ErrorCode::kShapeMismatch,
          "latent length " + std::to_string(latent.size()) + " != " +
              std::to_string(spec_.latent_dim));
  FeatureMap f{spec_.base, spec_.base, spec_.channels, {}};
  const std::size_t n = static_cast<std::size_t>(spec_.base) * spec_.base *
                        spec_.channels;
  f.values.assign(n, 0.0);
  for (std::size_t o = 0; o < n; ++o) {
    double acc = 0.0;
    for (std::size_t i = 0; i < latent.size(); ++i) {
      acc += input_weights_[o * latent.size() + i] * latent[i];
    }
    f.values[o] = acc;
  }
  return f;
}

FeatureMap ToyGenerator::stage_conv(int stage, const FeatureMap& in) const {
  require(stage >= 0 && stage < spec_.g, ErrorCode::kInvalidArgument,
          "stage index out of range");
  const int c = spec_.channels;
  require(in.channels == c, ErrorCode::kShapeMismatch,
          "stage input has wrong channel count");
  const int h = in.height * 2, w = in.width * 2;
  FeatureMap out{h, w, c, std::vector<double>(static_cast<std::size_t>(h) * w * c)};
  const auto& wts = conv_weights_[stage];
  const auto& bias = conv_bias_[stage];
  // Upsampled pixel (y, x) is in(y/2, x/2).
  auto up = [&](int y, int x, int ch) {
    return in.values[(static_cast<std::size_t>(y / 2) * in.width + x / 2) * c + ch];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double* dst = &out.values[(static_cast<std::size_t>(y) * w + x) * c];
      for (int o = 0; o < c; ++o) {
        double acc = bias[o];
        for (int i = 0; i < c; ++i) {
          for (int ky = -1; ky <= 1; ++ky) {
            const int yy = y + ky;
            if (yy < 0 || yy >= h) continue;
            for (int kx = -1; kx <= 1; ++kx) {
              const int xx = x + kx;
              if (xx < 0 || xx >= w) continue;
              acc += wts[((o * c + i) * 3 + (ky + 1)) * 3 + (kx + 1)] *
                     up(yy, xx, i);
            }
          }
        }
        dst[o] = acc;
      }
    }
  }
  return out;
}

FeatureMap ToyGenerator::modulate(const FeatureMap& f,
                                  const ModulationPair& pair) const {
  FeatureMap out = f;
  const std::size_t c = f.channels;
  for (std::size_t p = 0; p < out.values.size(); ++p) {
    const std::size_t ch = p % c;
    const double v = pair.alpha[ch] * f.values[p] + pair.beta[ch];
    out.values[p] = v >= 0.0 ? v : kLeak * v;
  }
  return out;
}

Image ToyGenerator::to_rgb(const FeatureMap& f) const {
  const int oc = spec_.out_channels;
  const int c = f.channels;
  Image img(f.height, f.width, oc);
  auto dst = img.data();
  for (std::size_t p = 0; p < static_cast<std::size_t>(f.height) * f.width; ++p) {
    for (int o = 0; o < oc; ++o) {
      double acc = rgb_bias_[o];
      for (int i = 0; i < c; ++i) acc += rgb_weights_[o * c + i] * f.values[p * c + i];
      dst[p * oc + o] = 1.0 / (1.0 + std::exp(-acc));
    }
  }
  return img;
}

std::pair<Image, Image> average_and_uncertainty(
    std::span<const Image> outputs) {
  require(!outputs.empty(), ErrorCode::kInvalidArgument,
          "uncertainty of an empty result set");
  const Image& first = outputs.front();
  for (const Image& o : outputs) require_same_shape(first, o, "pseudo results");
  const double n = static_cast<double>(outputs.size());
  Image mean = first;
  Image var(first.height(), first.width(), first.channels());
  auto m = mean.data();
  auto v = var.data();
  auto f = first.data();
  for (std::size_t p = 0; p < first.size(); ++p) {
    // Offsets from the first output keep identical inputs exact.
    double shift = 0.0;
    for (const Image& o : outputs) shift += o.data()[p] - f[p];
    m[p] = f[p] + shift / n;
    double acc = 0.0;
    for (const Image& o : outputs) {
      const double d = o.data()[p] - m[p];
      acc += d * d;
    }
    v[p] = acc / n;
  }
  return {std::move(mean), std::move(var)};
}

PseudoResultSet hpc_forward(const ToyGenerator& gen,
                            std::span<const double> latent,
                            const ModulationParams& mods) {
  mods.validate(gen.spec());
  std::vector<FeatureMap> branches{gen.input_map(latent)};
  for (int k = 1; k <= gen.spec().g; ++k) {
    const auto& pairs = mods.levels[k - 1];
    std::vector<FeatureMap> next;
    next.reserve(branches.size() * 2);
    for (std::size_t b = 0; b < branches.size(); ++b) {
      const FeatureMap shared = gen.stage_conv(k - 1, branches[b]);
      next.push_back(gen.modulate(shared, pairs[2 * b]));
      next.push_back(gen.modulate(shared, pairs[2 * b + 1]));
    }
    branches = std::move(next);
  }
  PseudoResultSet set;
  set.outputs.reserve(branches.size());
  for (const auto& leaf : branches) set.outputs.push_back(gen.to_rgb(leaf));
  auto [mean, var] = average_and_uncertainty(set.outputs);
  set.mean = std::move(mean);
  set.variance = std::move(var);
  return set;
}

ModulationHead::ModulationHead(const GeneratorSpec& spec) : spec_(spec) {
  spec_.validate();
  SeededRng rng = SeededRng(spec_.seed).fork("modulation-head");
  const std::size_t pairs = (std::size_t{2} << spec_.g) - 2;
  const std::size_t rows = pairs * spec_.channels;
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec_.feature_dim));
  alpha_weights_ = normal_weights(rng, rows * spec_.feature_dim, scale * kAlphaGain);
  beta_weights_ = normal_weights(rng, rows * spec_.feature_dim, scale * kBetaGain);
}

ModulationParams ModulationHead::encode(std::span<const double> feature) const {
  require(feature.size() == static_cast<std::size_t>(spec_.feature_dim),
          ErrorCode::kShapeMismatch,
          "modulation feature length " + std::to_string(feature.size()) +
              " != " + std::to_string(spec_.feature_dim));
  const std::size_t dim = feature.size();
  ModulationParams mods;
  std::size_t row = 0;
  for (int k = 1; k <= spec_.g; ++k) {
    std::vector<ModulationPair> level;
    for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
      ModulationPair pair;
      for (int ch = 0; ch < spec_.channels; ++ch, ++row) {
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          a += alpha_weights_[row * dim + i] * feature[i];
          b += beta_weights_[row * dim + i] * feature[i];
        }
        pair.alpha.push_back(1.0 + std::tanh(a) / 2.0);
        pair.beta.push_back(b);
      }
      level.push_back(std::move(pair));
    }
    mods.levels.push_back(std::move(level));
  }
  return mods;
}

GeneratedSet generate_pseudo_results(const GeneratorSpec& spec,
                                     std::uint64_t latent_seed) {
  ToyGenerator gen(spec);
  ModulationHead head(spec);
  SeededRng rng(latent_seed);
  GeneratedSet out;
  out.latent.resize(spec.latent_dim);
  for (double& v : out.latent) v = rng.normal();
  out.feature.resize(spec.feature_dim);
  for (double& v : out.feature) v = rng.normal();
  out.mods = head.encode(out.feature);
  out.results = hpc_forward(gen, out.latent, out.mods);
  return out;
}

}  // namespace spcx
