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

#include <span>
#include <string>
#include <vector>

#include "image.h"

namespace spcx {

inline constexpr double kPsnrCap = 100.0;

// 10 log10(1 / MSE) for unit-range images, capped at 100 dB.
double psnr(const Image& a, const Image& b);
double psnr_from_mse(double mse);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double data_range = 1.0;
};

// Mean SSIM over all valid window positions and channels (no padding).
double ssim(const Image& a, const Image& b, const SsimParams& params = {});

// 100 * cosine similarity.
double deg(std::span<const double> a, std::span<const double> b);

struct EmbeddingSet {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> vectors;

  std::size_t size() const { return labels.size(); }
  void validate() const;
};

enum class MissingLabel { kError, kMiss };

// Percentage of probes whose label is among the k most similar gallery
// entries (cosine similarity, ties to the lower gallery index).
double topk_accuracy(const EmbeddingSet& probes, const EmbeddingSet& gallery,
                     int k, MissingLabel missing = MissingLabel::kError);

// Mean deg between each probe and the first gallery entry with its label.
// Probes without a matching gallery label are skipped.
double mean_deg(const EmbeddingSet& probes, const EmbeddingSet& gallery);

}  // namespace spcx
