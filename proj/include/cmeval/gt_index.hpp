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
#include <optional>
#include <vector>

#include "cmeval/error.hpp"
#include "cmeval/matrix.hpp"

// Ground truth index: a chance-corrected true positive rate built on a two
// component classifier model. A proportion theta_j of true class j is handled
// by an infallible classifier; the rest is spread by a random classifier that
// picks estimated class i with probability a_i. Off-diagonal cells then factor
// as p_ij = a_i * b_j, which is Goodman's quasi-independence of the
// non-diagonal cells, and a, b are estimated by iterative proportional fitting.

namespace cmeval {

struct FitOptions {
  double tolerance = 1e-10;  // max parameter change between iterations
  int max_iterations = 1000;
  double misfit_threshold = 1e-8;  // residual above this flags a poor fit
};

struct QuasiIndependenceFit {
  std::vector<double> a;  // random-assignment probability per estimated class, sums to 1
  std::vector<double> b;  // random-component mass per true class
  int iterations = 0;
  double residual = 0.0;  // max |p_ij - a_i b_j| over i != j
  bool misfit = false;    // residual > FitOptions::misfit_threshold
};

namespace detail {

inline double off_diagonal_residual(const ConfusionMatrix& m, const std::vector<double>& a,
                                    const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i)
    for (std::size_t j = 0; j < m.k(); ++j)
      if (i != j) r = std::max(r, std::abs(m(i, j) - a[i] * b[j]));
  return r;
}

// Moves the scale so that a sums to one.
inline void normalize_scale(std::vector<double>& a, std::vector<double>& b) {
  double s = 0.0;
  for (double v : a) s += v;
  if (s <= 0.0) return;
  for (double& v : a) v /= s;
  for (double& v : b) v *= s;
}

}  // namespace detail

/// Fits p_ij = a_i b_j on the off-diagonal cells.
///
/// Each iteration rescales a to match the observed off-diagonal row sums, then
/// b to match the column sums. Starts from a_i = 1/k and b_j = off-diagonal
/// column sum. Stops when no normalized parameter moves by more than
/// opts.tolerance.
///
/// Throws TooFewClasses for k < 3 (the model is saturated), PerfectClassification
/// when every off-diagonal cell is zero, and NoConvergenceError when the
/// iteration budget runs out. A converged fit that does not reproduce the data
/// is returned with `misfit` set rather than rejected.
inline QuasiIndependenceFit fit_quasi_independence(const ConfusionMatrix& m,
                                                   const FitOptions& opts = {}) {
  const std::size_t k = m.k();
  if (k < 3) {
    throw Error(ErrorCode::TooFewClasses,
                "quasi-independence fit needs at least 3 classes, got k=" + std::to_string(k));
  }
  std::vector<double> row_off(k, 0.0), col_off(k, 0.0);
  double off_total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      row_off[i] += m(i, j);
      col_off[j] += m(i, j);
      off_total += m(i, j);
    }
  }
  if (off_total <= 0.0) {
    throw Error(ErrorCode::PerfectClassification,
                "all off-diagonal cells are zero; the fit is undefined on perfect classification");
  }

  std::vector<double> a(k, 1.0 / static_cast<double>(k));
  std::vector<double> b = col_off;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    std::vector<double> prev_a = a, prev_b = b;

    double b_sum = 0.0;
    for (double v : b) b_sum += v;
    for (std::size_t i = 0; i < k; ++i) {
      const double denom = b_sum - b[i];
      a[i] = denom > 0.0 ? row_off[i] / denom : 0.0;
    }
    double a_sum = 0.0;
    for (double v : a) a_sum += v;
    for (std::size_t j = 0; j < k; ++j) {
      const double denom = a_sum - a[j];
      b[j] = denom > 0.0 ? col_off[j] / denom : 0.0;
    }
    detail::normalize_scale(a, b);

    double change = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      change = std::max(change, std::abs(a[i] - prev_a[i]));
      change = std::max(change, std::abs(b[i] - prev_b[i]));
    }
    if (change < opts.tolerance) {
      QuasiIndependenceFit fit{std::move(a), std::move(b), it, 0.0, false};
      fit.residual = detail::off_diagonal_residual(m, fit.a, fit.b);
      fit.misfit = fit.residual > opts.misfit_threshold;
      return fit;
    }
  }
  throw NoConvergenceError(detail::off_diagonal_residual(m, a, b), opts.max_iterations);
}

struct GtIndexResult {
  // Per class; empty when the true class is empty (TPR undefined) or a_i = 1.
  std::vector<std::optional<double>> theta;
  QuasiIndependenceFit fit;
};

/// Chance-corrected TPR per class: theta_i = (TPR_i - a_i) / (1 - a_i).
inline GtIndexResult gt_index(const ConfusionMatrix& m, const FitOptions& opts = {}) {
  GtIndexResult out{{}, fit_quasi_independence(m, opts)};
  out.theta.resize(m.k());
  for (std::size_t i = 0; i < m.k(); ++i) {
    const BinaryCounts bc = class_counts(m, i);
    const double ai = out.fit.a[i];
    if (bc.tp + bc.fn <= 0.0 || 1.0 - ai <= 0.0) continue;
    const double tpr = bc.tp / (bc.tp + bc.fn);
    out.theta[i] = (tpr - ai) / (1.0 - ai);
  }
  return out;
}

}  // namespace cmeval
