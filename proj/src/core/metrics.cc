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

#include "metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.h"

namespace spcx {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && !a.empty(), ErrorCode::kShapeMismatch,
          "embedding lengths differ");
  const double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
  require(na > 0.0 && nb > 0.0, ErrorCode::kDegenerate,
          "cosine similarity of a zero vector");
  return dot(a, b) / (na * nb);
}

// Separable Gaussian filter, "valid" region only.
std::vector<double> filter_valid(const std::vector<double>& plane, int h,
                                 int w, const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int oh = h - n + 1, ow = w - n + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[i] * plane[y * w + x + i];
      tmp[y * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[i] * tmp[(y + i) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr_from_mse(double mse) {
  require(mse >= 0.0 && std::isfinite(mse), ErrorCode::kInvalidArgument,
          "MSE must be finite and >= 0");
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double psnr(const Image& a, const Image& b) {
  require_same_shape(a, b, "psnr");
  double acc = 0.0;
  auto x = a.data(), y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return psnr_from_mse(acc / static_cast<double>(x.size()));
}

double ssim(const Image& a, const Image& b, const SsimParams& p) {
  require_same_shape(a, b, "ssim");
  require(a.height() >= p.window && a.width() >= p.window,
          ErrorCode::kShapeMismatch,
          "image " + std::to_string(a.height()) + "x" +
              std::to_string(a.width()) + " is smaller than the " +
              std::to_string(p.window) + "px SSIM window");
  std::vector<double> k(p.window);
  const int half = p.window / 2;
  for (int i = 0; i < p.window; ++i) {
    k[i] = std::exp(-((i - half) * (i - half)) / (2.0 * p.sigma * p.sigma));
  }
  const double ksum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= ksum;

  const double c1 = (p.k1 * p.data_range) * (p.k1 * p.data_range);
  const double c2 = (p.k2 * p.data_range) * (p.k2 * p.data_range);
  const int h = a.height(), w = a.width();
  const std::size_t np = static_cast<std::size_t>(h) * w;
  double total = 0.0;
  std::size_t count = 0;
  for (int c = 0; c < a.channels(); ++c) {
    std::vector<double> x(np), y(np), xx(np), yy(np), xy(np);
    for (std::size_t i = 0; i < np; ++i) {
      x[i] = a.data()[i * a.channels() + c];
      y[i] = b.data()[i * b.channels() + c];
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, h, w, k), my = filter_valid(y, h, w, k);
    const auto sxx = filter_valid(xx, h, w, k), syy = filter_valid(yy, h, w, k);
    const auto sxy = filter_valid(xy, h, w, k);
    for (std::size_t i = 0; i < mx.size(); ++i) {
      const double vx = sxx[i] - mx[i] * mx[i];
      const double vy = syy[i] - my[i] * my[i];
      const double cov = sxy[i] - mx[i] * my[i];
      const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2);
      const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
      total += num / den;
    }
    count += mx.size();
  }
  return total / static_cast<double>(count);
}

double deg(std::span<const double> a, std::span<const double> b) {
  return 100.0 * cosine(a, b);
}

void EmbeddingSet::validate() const {
  require(labels.size() == vectors.size(), ErrorCode::kShapeMismatch,
          "embedding labels and vectors are misaligned");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    require(vectors[i].size() == vectors.front().size(),
            ErrorCode::kShapeMismatch, "embedding lengths differ");
    require(std::any_of(vectors[i].begin(), vectors[i].end(),
                        [](double v) { return v != 0.0; }),
            ErrorCode::kDegenerate,
            "zero embedding at row " + std::to_string(i));
  }
}

double topk_accuracy(const EmbeddingSet& probes, const EmbeddingSet& gallery,
                     int k, MissingLabel missing) {
  require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  require(gallery.size() > 0, ErrorCode::kInvalidArgument,
          "gallery is empty");
  require(probes.size() > 0, ErrorCode::kInvalidArgument, "no probes");
  probes.validate();
  gallery.validate();
  std::size_t hits = 0;
  std::vector<std::size_t> order(gallery.size());
  std::vector<double> sim(gallery.size());
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto& label = probes.labels[p];
    const bool present = std::find(gallery.labels.begin(), gallery.labels.end(),
                                   label) != gallery.labels.end();
    if (!present) {
      require(missing == MissingLabel::kMiss, ErrorCode::kInvalidArgument,
              "probe label '" + label + "' is absent from the gallery");
      continue;
    }
    for (std::size_t g = 0; g < gallery.size(); ++g) {
      sim[g] = cosine(probes.vectors[p], gallery.vectors[g]);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });
    const std::size_t top = std::min<std::size_t>(k, gallery.size());
    for (std::size_t r = 0; r < top; ++r) {
      if (gallery.labels[order[r]] == label) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(probes.size());
}

double mean_deg(const EmbeddingSet& probes, const EmbeddingSet& gallery) {
  probes.validate();
  gallery.validate();
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    auto it = std::find(gallery.labels.begin(), gallery.labels.end(),
                        probes.labels[p]);
    if (it == gallery.labels.end()) continue;
    acc += deg(probes.vectors[p], gallery.vectors[it - gallery.labels.begin()]);
    ++n;
  }
  require(n > 0, ErrorCode::kInvalidArgument,
          "no probe shares a label with the gallery");
  return acc / static_cast<double>(n);
}

}  // namespace spcx
