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

#include "contextual.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "error.h"
#include "features.h"
#include "parallel.h"

namespace spcx {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Order-independent sum: terms are sorted first.
double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

std::vector<double> norms_of(PointsView p, const char* which) {
  std::vector<double> norms(p.count);
  for (std::size_t i = 0; i < p.count; ++i) {
    auto v = p.point(i);
    norms[i] = std::sqrt(dot(v, v));
    if (!(norms[i] > 0.0)) {
      std::ostringstream msg;
      msg << "zero-norm vector at index " << i << " of " << which
          << " (degenerate sub-image; consider mean shift)";
      fail(ErrorCode::kDegenerate, msg.str());
    }
  }
  return norms;
}

std::vector<double> mean_shifted(PointsView p) {
  std::vector<double> mean(p.dim, 0.0);
  for (std::size_t i = 0; i < p.count; ++i) {
    auto v = p.point(i);
    for (std::size_t k = 0; k < p.dim; ++k) mean[k] += v[k];
  }
  for (double& m : mean) m /= static_cast<double>(p.count);
  std::vector<double> out(p.values.begin(), p.values.end());
  for (std::size_t i = 0; i < p.count; ++i) {
    for (std::size_t k = 0; k < p.dim; ++k) out[i * p.dim + k] -= mean[k];
  }
  return out;
}

Matrix cosine_from_norms(PointsView x, PointsView y,
                         const std::vector<double>& nx,
                         const std::vector<double>& ny) {
  Matrix d(x.count, y.count);
  parallel_for(x.count, [&](std::size_t i) {
    auto xi = x.point(i);
    for (std::size_t j = 0; j < y.count; ++j) {
      double c = dot(xi, y.point(j)) / (nx[i] * ny[j]);
      d(i, j) = std::max(0.0, 1.0 - c);
    }
  });
  return d;
}

std::size_t argmin_row(std::span<const double> row) {
  return static_cast<std::size_t>(
      std::min_element(row.begin(), row.end()) - row.begin());
}

}  // namespace

const char* to_string(Aggregation form) {
  return form == Aggregation::kMaxLog ? "max" : "sum";
}

Aggregation parse_aggregation(const std::string& name) {
  if (name == "max") return Aggregation::kMaxLog;
  if (name == "sum") return Aggregation::kSumLog;
  fail(ErrorCode::kInvalidArgument,
       "unknown aggregation form '" + name + "' (expected max|sum)");
}

void ContextualConfig::validate() const {
  require(bandwidth > 0.0 && std::isfinite(bandwidth),
          ErrorCode::kInvalidArgument, "bandwidth must be positive");
  require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::kInvalidArgument,
          "epsilon must be positive");
  require(rate >= 1, ErrorCode::kInvalidArgument, "rate must be >= 1");
}

PointsView points_of(const SubImageCollection& coll) {
  return {coll.values(), coll.count(), coll.dim()};
}

Matrix cosine_distance_matrix(PointsView x, PointsView y) {
  require(x.dim == y.dim, ErrorCode::kShapeMismatch,
          "point dimensions differ: " + std::to_string(x.dim) + " vs " +
              std::to_string(y.dim));
  return cosine_from_norms(x, y, norms_of(x, "X"), norms_of(y, "Y"));
}

Matrix cosine_distance_matrix(const SubImageCollection& x,
                              const SubImageCollection& y) {
  return cosine_distance_matrix(points_of(x), points_of(y));
}

Matrix normalize_distances(const Matrix& d, double epsilon) {
  Matrix out(d.rows(), d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    auto row = d.row(i);
    const double denom = *std::min_element(row.begin(), row.end()) + epsilon;
    for (std::size_t j = 0; j < d.cols(); ++j) out(i, j) = row[j] / denom;
  }
  return out;
}

Matrix contextual_kernel(const Matrix& normalized, double bandwidth) {
  Matrix a(normalized.rows(), normalized.cols());
  std::vector<double> terms(normalized.cols());
  for (std::size_t i = 0; i < normalized.rows(); ++i) {
    auto row = normalized.row(i);
    // max of (1 - d)/h sits at the smallest d
    const double zmax = (1.0 - *std::min_element(row.begin(), row.end())) /
                        bandwidth;
    for (std::size_t j = 0; j < row.size(); ++j) {
      a(i, j) = std::exp((1.0 - row[j]) / bandwidth - zmax);
      terms[j] = a(i, j);
    }
    const double total = sorted_sum(terms);
    for (std::size_t j = 0; j < row.size(); ++j) a(i, j) /= total;
  }
  return a;
}

double aggregate(const Matrix& kernel, Aggregation form, double epsilon) {
  if (form == Aggregation::kMaxLog) {
    std::vector<double> col_max(kernel.cols(),
                                -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < kernel.rows(); ++i) {
      for (std::size_t j = 0; j < kernel.cols(); ++j) {
        col_max[j] = std::max(col_max[j], kernel(i, j));
      }
    }
    const double mean = sorted_sum(col_max) / kernel.cols();
    return -std::log(mean + epsilon);
  }
  std::vector<double> logs(kernel.rows());
  std::vector<double> terms(kernel.cols());
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    auto row = kernel.row(i);
    terms.assign(row.begin(), row.end());
    logs[i] = std::log(sorted_sum(terms) + epsilon);
  }
  return -sorted_sum(logs) / kernel.rows();
}

ContextualResult contextual_distance(PointsView x_in, PointsView y_in,
                                     const ContextualConfig& cfg,
                                     bool with_grad) {
  cfg.validate();
  require(x_in.dim == y_in.dim, ErrorCode::kShapeMismatch,
          "point dimensions differ: " + std::to_string(x_in.dim) + " vs " +
              std::to_string(y_in.dim));
  require(x_in.count > 0 && y_in.count > 0, ErrorCode::kInvalidArgument,
          "contextual distance of an empty point set");

  std::vector<double> xs, ys;
  PointsView x = x_in, y = y_in;
  if (cfg.mean_shift) {
    xs = mean_shifted(x_in);
    ys = mean_shifted(y_in);
    x.values = xs;
    y.values = ys;
  }
  const auto nx = norms_of(x, "X");
  const auto ny = norms_of(y, "Y");
  const Matrix d = cosine_from_norms(x, y, nx, ny);
  const Matrix dn = normalize_distances(d, cfg.epsilon);
  const Matrix a = contextual_kernel(dn, cfg.bandwidth);

  ContextualResult result;
  result.value = aggregate(a, cfg.form, cfg.epsilon);
  if (!with_grad) return result;

  const std::size_t n = x.count, m = y.count, dim = x.dim;

  // dL/dA
  Matrix g_a(n, m);
  if (cfg.form == Aggregation::kMaxLog) {
    std::vector<double> col_max(m);
    std::vector<std::size_t> arg(m, 0);
    for (std::size_t j = 0; j < m; ++j) col_max[j] = a(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (a(i, j) > col_max[j]) {
          col_max[j] = a(i, j);
          arg[j] = i;
        }
      }
    }
    const double mean = sorted_sum(col_max) / m;
    const double coef = -1.0 / ((mean + cfg.epsilon) * m);
    for (std::size_t j = 0; j < m; ++j) g_a(arg[j], j) = coef;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += a(i, j);
      const double coef = -1.0 / (n * (s + cfg.epsilon));
      for (std::size_t j = 0; j < m; ++j) g_a(i, j) = coef;
    }
  }

  // Back through softmax, the 1/h scaling, the row-min normalization and the
  // cosine. Each row i only touches x_i, so rows are independent.
  result.grad_x.assign(n * dim, 0.0);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> g_d(m);
    double inner = 0.0;
    for (std::size_t j = 0; j < m; ++j) inner += g_a(i, j) * a(i, j);
    auto drow = d.row(i);
    const std::size_t kmin = argmin_row(drow);
    const double denom = drow[kmin] + cfg.epsilon;
    double g_min = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double g_z = a(i, k) * (g_a(i, k) - inner);
      const double g_dn = -g_z / cfg.bandwidth;
      g_d[k] = g_dn / denom;
      g_min -= g_dn * drow[k] / (denom * denom);
    }
    g_d[kmin] += g_min;

    auto xi = x.point(i);
    double* gx = result.grad_x.data() + i * dim;
    double radial = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double g_c = -g_d[k];
      if (g_c == 0.0) continue;
      auto yk = y.point(k);
      const double scale = g_c / (nx[i] * ny[k]);
      for (std::size_t e = 0; e < dim; ++e) gx[e] += scale * yk[e];
      radial += g_c * (1.0 - drow[k]);
    }
    const double rscale = radial / (nx[i] * nx[i]);
    for (std::size_t e = 0; e < dim; ++e) gx[e] -= rscale * xi[e];
  });

  if (cfg.mean_shift) {
    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t e = 0; e < dim; ++e) mean[e] += result.grad_x[i * dim + e];
    }
    for (double& v : mean) v /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t e = 0; e < dim; ++e) result.grad_x[i * dim + e] -= mean[e];
    }
  }
  return result;
}

namespace {

std::pair<SubImageCollection, SubImageCollection> decompose_pair(
    const Image& x, const Image& y, const ContextualConfig& cfg) {
  cfg.validate();
  require_same_shape(x, y, "spcx");
  return {pk_decompose(x, cfg.rate, cfg.mode),
          pk_decompose(y, cfg.rate, cfg.mode)};
}

}  // namespace

double spcx(const Image& x, const Image& y, const ContextualConfig& cfg) {
  auto [cx_, cy_] = decompose_pair(x, y, cfg);
  return contextual_distance(points_of(cx_), points_of(cy_), cfg, false).value;
}

std::pair<double, Image> spcx_value_and_grad(const Image& x, const Image& y,
                                             const ContextualConfig& cfg) {
  auto [cx_, cy_] = decompose_pair(x, y, cfg);
  auto res = contextual_distance(points_of(cx_), points_of(cy_), cfg, true);
  SubImageCollection grad(cx_.mode(), cx_.rate(), cx_.src_height(),
                          cx_.src_width(), cx_.src_channels(),
                          std::move(res.grad_x));
  return {res.value, pk_recompose(grad)};
}

Image spcx_grad(const Image& x, const Image& y, const ContextualConfig& cfg) {
  return spcx_value_and_grad(x, y, cfg).second;
}

Matrix spcx_kernel(const Image& x, const Image& y,
                   const ContextualConfig& cfg) {
  auto [cx_, cy_] = decompose_pair(x, y, cfg);
  PointsView px = points_of(cx_), py = points_of(cy_);
  std::vector<double> xs, ys;
  if (cfg.mean_shift) {
    xs = mean_shifted(px);
    ys = mean_shifted(py);
    px.values = xs;
    py.values = ys;
  }
  return contextual_kernel(
      normalize_distances(cosine_distance_matrix(px, py), cfg.epsilon),
      cfg.bandwidth);
}

double cx(const Image& x, const Image& y, const FeatureExtractor& extractor,
          double bandwidth, double epsilon) {
  require_same_shape(x, y, "cx");
  const auto fx = extractor.extract(x);
  const auto fy = extractor.extract(y);
  require(!fx.empty() && fx.size() == fy.size(), ErrorCode::kShapeMismatch,
          "feature extractor returned inconsistent map counts");
  ContextualConfig cfg;
  cfg.bandwidth = bandwidth;
  cfg.epsilon = epsilon;
  cfg.form = Aggregation::kMaxLog;
  cfg.rate = 1;
  double total = 0.0;
  for (std::size_t k = 0; k < fx.size(); ++k) {
    total += contextual_distance(fx[k].points(), fy[k].points(), cfg, false)
                 .value;
  }
  return total / static_cast<double>(fx.size());
}

}  // namespace spcx
