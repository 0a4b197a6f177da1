// Copyright 2026 The cmeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "cmeval/matrix.hpp"

// Reference matrices from the case studies, plus random generators.
namespace cmeval::testing {

// Perfect misclassification with a maximal association; printed with
// display-rounded thirds (0.33/0.34).
inline ConfusionMatrix cyclic_rounded() {
  return ConfusionMatrix::from_proportions({{0.00, 0.00, 0.33}, {0.33, 0.00, 0.00}, {0.00, 0.34, 0.00}});
}

// Same cyclic misclassification with exact thirds.
inline ConfusionMatrix cyclic() {
  return ConfusionMatrix::from_counts({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
}

// Perfect classification.
inline ConfusionMatrix perfect() {
  return ConfusionMatrix::from_counts({{33, 0, 0}, {0, 34, 0}, {0, 0, 33}});
}

// Perfect misclassification.
inline ConfusionMatrix misclassified() {
  return ConfusionMatrix::from_proportions({{0.00, 0.10, 0.10}, {0.30, 0.00, 0.10}, {0.20, 0.20, 0.00}});
}

// Intermediate case, weaker on the second class.
inline ConfusionMatrix classifier_a() {
  return ConfusionMatrix::from_counts({{30, 12, 2}, {2, 19, 1}, {1, 3, 30}});
}

// Second classifier on the same data: perfect on classes 1 and 3.
inline ConfusionMatrix classifier_b() {
  return ConfusionMatrix::from_counts({{33, 11, 0}, {0, 12, 0}, {0, 11, 33}});
}

/// Random valid matrix. With `sparse`, about a quarter of the cells are zero,
/// which exercises undefined rates.
inline ConfusionMatrix random_matrix(std::mt19937_64& rng, std::size_t k, bool sparse = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> rows(k, std::vector<double>(k));
  double total = 0.0;
  for (auto& row : rows) {
    for (double& v : row) {
      v = sparse && u(rng) < 0.25 ? 0.0 : u(rng);
      total += v;
    }
  }
  if (total == 0.0) rows[0][0] = total = 1.0;
  return ConfusionMatrix::from_proportions(rows, true);
}

inline std::size_t random_k(std::mt19937_64& rng, std::size_t lo = 2, std::size_t hi = 6) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace cmeval::testing
