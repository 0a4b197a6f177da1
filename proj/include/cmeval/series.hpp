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

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cmeval/error.hpp"
#include "cmeval/matrix.hpp"

namespace cmeval {

/// True class proportions between balanced (p = 0) and a halving sequence
/// (p = 1) where each class has twice the instances of the next one:
///
///   pi_i = (1 - p) / k + p * 2^(k-1-i) / (2^k - 1),   i = 0..k-1
inline std::vector<double> class_proportions(std::size_t k, double p) {
  if (k < 2 || k > 60) {
    throw Error(ErrorCode::InvalidInput, "class count k=" + std::to_string(k) + " must be in [2, 60]");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "imbalance p=" + std::to_string(p) + " must be in [0, 1]");
  }
  const double kd = static_cast<double>(k);
  const double denom = std::ldexp(1.0, static_cast<int>(k)) - 1.0;
  std::vector<double> pi(k);
  for (std::size_t i = 0; i < k; ++i)
    pi[i] = (1.0 - p) / kd + p * std::ldexp(1.0, static_cast<int>(k - 1 - i)) / denom;
  return pi;
}

/// Matrix with controlled errors: class j keeps a fraction c_j of its
/// instances on the diagonal and spreads the rest uniformly over the k - 1
/// other estimated classes. Column sums equal pi.
inline ConfusionMatrix controlled_matrix(const std::vector<double>& pi, const std::vector<double>& c) {
  const std::size_t k = pi.size();
  if (c.size() != k) {
    throw Error(ErrorCode::InvalidInput, "retention vector has " + std::to_string(c.size()) +
                                             " entries but there are " + std::to_string(k) + " classes");
  }
  std::vector<std::vector<double>> rows(k, std::vector<double>(k));
  for (std::size_t j = 0; j < k; ++j) {
    if (!(c[j] >= 0.0 && c[j] <= 1.0)) {
      throw Error(ErrorCode::InvalidInput,
                  "retention c_" + std::to_string(j + 1) + "=" + std::to_string(c[j]) + " must be in [0, 1]");
    }
    const double off = (1.0 - c[j]) / static_cast<double>(k - 1) * pi[j];
    for (std::size_t i = 0; i < k; ++i) rows[i][j] = i == j ? c[j] * pi[j] : off;
  }
  return ConfusionMatrix::from_proportions(std::move(rows));
}

enum class DropMode {
  AllClasses,      // x series: c_i = c for every class
  FirstClassOnly,  // y series: c_0 = c, others 1
};

/// Evenly spaced retention values from c_lo to 1 inclusive.
inline std::vector<double> make_grid(double step = 0.01, double c_lo = 0.0) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "grid step " + std::to_string(step) + " must be in (0, 1]");
  }
  if (!(c_lo >= 0.0 && c_lo < 1.0)) {
    throw Error(ErrorCode::InvalidInput, "grid lower bound c_lo=" + std::to_string(c_lo) + " must be in [0, 1)");
  }
  const double span = 1.0 - c_lo;
  const auto n = static_cast<std::size_t>(std::floor(span / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(c_lo + static_cast<double>(i) * step);
  if (1.0 - grid.back() > 1e-9) {
    grid.push_back(1.0);
  } else {
    grid.back() = 1.0;
  }
  return grid;
}

struct SeriesSpec {
  std::size_t k = 3;
  double p = 0.0;
  std::vector<double> grid = make_grid();
  DropMode mode = DropMode::AllClasses;
  double c_lo = 0.0;

  void validate() const {
    if (k < 2) throw Error(ErrorCode::InvalidInput, "series needs k >= 2, got k=" + std::to_string(k));
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidInput, "imbalance p=" + std::to_string(p) + " must be in [0, 1]");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= c_lo && grid[i] <= 1.0)) {
        throw Error(ErrorCode::InvalidInput,
                    "grid value " + std::to_string(grid[i]) + " outside [c_lo, 1] with c_lo=" + std::to_string(c_lo));
      }
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw Error(ErrorCode::InvalidInput, "grid must be strictly increasing at index " + std::to_string(i));
      }
    }
  }
};

inline std::vector<double> retention(std::size_t k, double c, DropMode mode) {
  std::vector<double> out(k, mode == DropMode::AllClasses ? c : 1.0);
  out[0] = c;
  return out;
}

inline ConfusionMatrix series_matrix(const std::vector<double>& pi, double c, DropMode mode) {
  return controlled_matrix(pi, retention(pi.size(), c, mode));
}

/// One matrix per grid value, all sharing the same column marginals.
inline std::vector<ConfusionMatrix> make_series(const SeriesSpec& spec) {
  spec.validate();
  const std::vector<double> pi = class_proportions(spec.k, spec.p);
  std::vector<ConfusionMatrix> out;
  out.reserve(spec.grid.size());
  for (double c : spec.grid) out.push_back(series_matrix(pi, c, spec.mode));
  return out;
}

}  // namespace cmeval
