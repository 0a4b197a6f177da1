// Copyright 2026 The cmeval Authors
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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmeval/error.hpp"

namespace cmeval {

// Tolerance on the total mass of a proportion matrix given as input.
inline constexpr double kSumTolerance = 1e-9;

/// A k x k confusion matrix of proportions.
///
/// Row i is the estimated class, column j the true class, so cell(i, j) is the
/// proportion of instances put in estimated class i that belong to true class j.
/// Column sums are therefore the true class proportions. Class indices are
/// zero-based throughout the library.
///
/// Instances are immutable and always valid: cells are finite, nonnegative and
/// sum to one within kSumTolerance.
class ConfusionMatrix {
 public:
  /// Validates a row-major grid of proportions. With normalize set, any grid
  /// with a positive finite total is rescaled to unit mass instead of being
  /// rejected for a bad sum.
  static ConfusionMatrix from_proportions(std::vector<std::vector<double>> rows,
                                          bool normalize = false) {
    const std::size_t k = check_square(rows);
    std::vector<double> cells;
    cells.reserve(k * k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const double v = rows[i][j];
        if (!std::isfinite(v) || v < 0.0) {
          throw Error(ErrorCode::InvalidInput,
                      "cell (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") must be a finite nonnegative number, got " + std::to_string(v));
        }
        cells.push_back(v);
        total += v;
      }
    }
    if (total <= 0.0) throw Error(ErrorCode::EmptyMatrix, "matrix total is zero");
    if (normalize) {
      for (double& v : cells) v /= total;
    } else if (std::abs(total - 1.0) > kSumTolerance) {
      throw Error(ErrorCode::InvalidInput,
                  "proportions must sum to 1 (got " + std::to_string(total) +
                      "); use counts or normalization");
    }
    return ConfusionMatrix(k, std::move(cells));
  }

  /// Converts a grid of instance counts to proportions.
  static ConfusionMatrix from_counts(const std::vector<std::vector<std::int64_t>>& counts) {
    const std::size_t k = check_square(counts);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (counts[i][j] < 0) {
          throw Error(ErrorCode::InvalidInput,
                      "count (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") is negative: " + std::to_string(counts[i][j]));
        }
        total += counts[i][j];
      }
    }
    if (total == 0) throw Error(ErrorCode::EmptyMatrix, "matrix total count is zero");
    std::vector<double> cells;
    cells.reserve(k * k);
    for (const auto& row : counts)
      for (std::int64_t c : row) cells.push_back(static_cast<double>(c) / static_cast<double>(total));
    return ConfusionMatrix(k, std::move(cells));
  }

  std::size_t k() const noexcept { return k_; }
  double operator()(std::size_t i, std::size_t j) const { return cells_[i * k_ + j]; }
  std::span<const double> cells() const noexcept { return cells_; }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out(k_, std::vector<double>(k_));
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

  /// Swaps the roles of estimated and true classes.
  ConfusionMatrix transposed() const {
    std::vector<double> cells(k_ * k_);
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j) cells[j * k_ + i] = (*this)(i, j);
    return ConfusionMatrix(k_, std::move(cells));
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < k_; ++i) t += (*this)(i, i);
    return t;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  ConfusionMatrix(std::size_t k, std::vector<double> cells) : k_(k), cells_(std::move(cells)) {}

  template <typename T>
  static std::size_t check_square(const std::vector<std::vector<T>>& rows) {
    const std::size_t k = rows.size();
    if (k < 2) {
      throw Error(ErrorCode::InvalidInput,
                  "a confusion matrix needs at least 2 classes, got k=" + std::to_string(k));
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (rows[i].size() != k) {
        throw Error(ErrorCode::InvalidInput,
                    "matrix is not square: row " + std::to_string(i + 1) + " has " +
                        std::to_string(rows[i].size()) + " entries, expected " + std::to_string(k));
      }
    }
    return k;
  }

  std::size_t k_;
  std::vector<double> cells_;
};

struct Marginals {
  std::vector<double> rows;  // p_{i+}, estimated class proportions
  std::vector<double> cols;  // p_{+j}, true class proportions
};

inline Marginals marginals(const ConfusionMatrix& m) {
  const std::size_t k = m.k();
  Marginals out{std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      out.rows[i] += m(i, j);
      out.cols[j] += m(i, j);
    }
  }
  return out;
}

/// One-vs-rest decomposition of a class, as proportions of the whole matrix.
struct BinaryCounts {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double tn = 0.0;
};

inline void check_class(const ConfusionMatrix& m, std::size_t cls) {
  if (cls >= m.k()) {
    throw Error(ErrorCode::InvalidInput, "class index " + std::to_string(cls + 1) +
                                             " out of range 1.." + std::to_string(m.k()));
  }
}

inline BinaryCounts class_counts(const ConfusionMatrix& m, std::size_t cls) {
  check_class(m, cls);
  double row = 0.0;
  double col = 0.0;
  for (std::size_t j = 0; j < m.k(); ++j) {
    row += m(cls, j);
    col += m(j, cls);
  }
  BinaryCounts bc;
  bc.tp = m(cls, cls);
  // Clamp the rounding noise of the subtractions at zero.
  bc.fp = std::max(0.0, row - bc.tp);
  bc.fn = std::max(0.0, col - bc.tp);
  bc.tn = std::max(0.0, 1.0 - bc.tp - bc.fp - bc.fn);
  return bc;
}

/// Merges every class except `cls` into a single "rest" class.
/// The result is [[tp, fp], [fn, tn]]: class 0 is `cls`, class 1 the rest.
inline ConfusionMatrix binarize(const ConfusionMatrix& m, std::size_t cls) {
  const BinaryCounts bc = class_counts(m, cls);
  return ConfusionMatrix::from_proportions({{bc.tp, bc.fp}, {bc.fn, bc.tn}}, true);
}

/// Nonnegative per-cell importance weights.
class WeightMatrix {
 public:
  explicit WeightMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    const std::size_t k = rows_.size();
    bool any_positive = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (rows_[i].size() != k)
        throw Error(ErrorCode::InvalidInput, "weight matrix is not square at row " + std::to_string(i + 1));
      for (std::size_t j = 0; j < k; ++j) {
        const double w = rows_[i][j];
        if (!std::isfinite(w) || w < 0.0) {
          throw Error(ErrorCode::InvalidInput,
                      "weight (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") must be finite and nonnegative, got " + std::to_string(w));
        }
        any_positive = any_positive || w > 0.0;
      }
    }
    if (!any_positive) throw Error(ErrorCode::InvalidInput, "weight matrix has no positive weight");
  }

  static WeightMatrix ones(std::size_t k) {
    return WeightMatrix(std::vector<std::vector<double>>(k, std::vector<double>(k, 1.0)));
  }

  std::size_t k() const noexcept { return rows_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }

 private:
  std::vector<std::vector<double>> rows_;
};

/// Multiplies each cell by its weight and renormalizes to unit mass.
inline ConfusionMatrix apply_weights(const ConfusionMatrix& m, const WeightMatrix& w) {
  if (w.k() != m.k()) {
    throw Error(ErrorCode::InvalidInput, "weight matrix has k=" + std::to_string(w.k()) +
                                             " but confusion matrix has k=" + std::to_string(m.k()));
  }
  auto rows = m.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i) {
    for (std::size_t j = 0; j < m.k(); ++j) {
      rows[i][j] *= w(i, j);
      total += rows[i][j];
    }
  }
  if (total <= 0.0) throw Error(ErrorCode::DegenerateWeights, "weighted matrix total is zero");
  return ConfusionMatrix::from_proportions(std::move(rows), true);
}

}  // namespace cmeval
