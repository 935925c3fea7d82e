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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "image.h"
#include "pk.h"

namespace spcx {

class FeatureExtractor;

enum class Aggregation {
  kMaxLog = 0,  // -log(mean_j max_i A_ij + eps)
  kSumLog = 1,  // -(1/N) sum_i log(sum_j A_ij + eps); constant by construction
};

const char* to_string(Aggregation form);
Aggregation parse_aggregation(const std::string& name);

struct ContextualConfig {
  double bandwidth = 0.2;
  double epsilon = 1e-5;
  Aggregation form = Aggregation::kMaxLog;
  int rate = 32;
  PkMode mode = PkMode::kBlock;
  // Subtract each collection's mean vector before cosine distances.
  bool mean_shift = false;

  void validate() const;
};

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> values() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// A set of `count` points of length `dim`, stored contiguously.
struct PointsView {
  std::span<const double> values;
  std::size_t count = 0;
  std::size_t dim = 0;

  std::span<const double> point(std::size_t i) const {
    return values.subspan(i * dim, dim);
  }
};

PointsView points_of(const SubImageCollection& coll);

// Raw cosine distances d_ij = 1 - cos(x_i, y_j), clamped at 0. Throws
// kDegenerate naming the first zero-norm vector.
Matrix cosine_distance_matrix(PointsView x, PointsView y);
Matrix cosine_distance_matrix(const SubImageCollection& x,
                              const SubImageCollection& y);

// d_ij / (min_k d_ik + epsilon), row-wise.
Matrix normalize_distances(const Matrix& d, double epsilon);

// Row softmax of (1 - d~_ij) / h, evaluated with a row-max shift.
Matrix contextual_kernel(const Matrix& normalized, double bandwidth);

double aggregate(const Matrix& kernel, Aggregation form, double epsilon);

struct ContextualResult {
  double value = 0.0;
  // d(value)/d(x points), count x dim; empty unless requested.
  std::vector<double> grad_x;
};

// Contextual distance between two point sets. Sums are taken over sorted
// terms so the value is bit-identical under any reordering of either set.
ContextualResult contextual_distance(PointsView x, PointsView y,
                                     const ContextualConfig& cfg,
                                     bool with_grad);

// Spatial periodic contextual distance between the PK collections of X and Y.
double spcx(const Image& x, const Image& y, const ContextualConfig& cfg);

// Gradient of spcx with respect to the pixels of X. For MaxLog the column
// maximum and the row minimum use the lowest index on ties.
Image spcx_grad(const Image& x, const Image& y, const ContextualConfig& cfg);

std::pair<double, Image> spcx_value_and_grad(const Image& x, const Image& y,
                                             const ContextualConfig& cfg);

// Kernel matrix A between the PK collections, for inspection.
Matrix spcx_kernel(const Image& x, const Image& y, const ContextualConfig& cfg);

// Vanilla contextual distance over feature-map positions: every spatial
// location of a map is one point with the map's channels as coordinates.
// Multi-scale extractors average the per-map distances. MaxLog aggregation.
double cx(const Image& x, const Image& y, const FeatureExtractor& extractor,
          double bandwidth = 0.2, double epsilon = 1e-5);

}  // namespace spcx
