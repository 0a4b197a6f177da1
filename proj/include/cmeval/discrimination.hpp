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
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmeval/error.hpp"
#include "cmeval/matrix.hpp"
#include "cmeval/measures.hpp"
#include "cmeval/series.hpp"

namespace cmeval {

// Differences below this are ties.
inline constexpr double kTieTolerance = 1e-12;

enum class Preference { First, Second, Tie };

inline std::string_view to_string(Preference p) {
  switch (p) {
    case Preference::First: return "first";
    case Preference::Second: return "second";
    case Preference::Tie: return "tie";
  }
  return "na";
}

inline Preference compare_values(double a, double b) {
  if (a > b + kTieTolerance) return Preference::First;
  if (b > a + kTieTolerance) return Preference::Second;
  return Preference::Tie;
}

/// Which of two matrices the measure ranks higher. Throws NotComparable when
/// the measure is undefined on either one.
inline Preference preference(const MeasureRef& ref, const ConfusionMatrix& a, const ConfusionMatrix& b) {
  const auto va = evaluate(ref, a);
  const auto vb = evaluate(ref, b);
  if (!va || !vb) {
    throw Error(ErrorCode::NotComparable,
                "measure '" + ref.label() + "' is undefined on " + (!va ? "the first" : "the second") + " matrix");
  }
  return compare_values(*va, *vb);
}

struct LineConfig {
  double grid_step = 0.01;
  double c_lo = 0.0;
  double solver_tolerance = 1e-9;
  int scan_samples = 32;
};

enum class PointStatus {
  Crossing,    // c_y solves measure(Y(c_y)) = measure(X(c_x))
  NoCrossing,  // the difference keeps one sign over [c_lo, 1]
  Undefined,   // measure undefined at X(c_x) or somewhere on the y range
};

struct LinePoint {
  double c_x = 0.0;
  std::optional<double> c_y;
  PointStatus status = PointStatus::Undefined;
  // For NoCrossing: the series preferred at every c_y (First = x series).
  std::optional<Preference> preference;
};

/// Zero-difference isometric between the x series (error in every class) and
/// the y series (error in the first class only).
struct DiscriminationLine {
  MeasureRef measure;
  double p = 0.0;
  std::size_t k = 0;
  double c_lo = 0.0;
  std::vector<LinePoint> points;  // one per grid value of c_x, in grid order
  // Set when the scan found the y-series measure decreasing somewhere.
  bool non_monotone = false;

  std::vector<LinePoint> crossings() const { return filter(PointStatus::Crossing); }
  std::vector<LinePoint> no_crossing() const { return filter(PointStatus::NoCrossing); }

 private:
  std::vector<LinePoint> filter(PointStatus s) const {
    std::vector<LinePoint> out;
    for (const auto& pt : points)
      if (pt.status == s) out.push_back(pt);
    return out;
  }
};

namespace detail {

struct YSeriesFunction {
  const MeasureRef& ref;
  const std::vector<double>& pi;
  double target;

  std::optional<double> operator()(double c_y) const {
    auto v = evaluate(ref, series_matrix(pi, c_y, DropMode::FirstClassOnly));
    if (!v) return std::nullopt;
    return *v - target;
  }
};

}  // namespace detail

/// Solves one grid point of a discrimination line.
///
/// The difference f(c_y) = measure(Y(c_y)) - measure(X(c_x)) is sampled at
/// scan_samples + 1 points first. If it is monotone the root is bracketed by
/// the interval ends, otherwise by the first sampled sign change.
inline LinePoint solve_line_point(const MeasureRef& ref, const std::vector<double>& pi, double c_x,
                                  const LineConfig& cfg, bool* non_monotone = nullptr) {
  LinePoint pt;
  pt.c_x = c_x;
  const auto mx = evaluate(ref, series_matrix(pi, c_x, DropMode::AllClasses));
  if (!mx) return pt;
  const detail::YSeriesFunction f{ref, pi, *mx};

  // Samples where the y measure is undefined (e.g. an empty row) are skipped.
  const int samples = std::max(cfg.scan_samples, 1);
  std::vector<double> xs, fs;
  for (int s = 0; s <= samples; ++s) {
    const double c = s == samples ? 1.0 : cfg.c_lo + (1.0 - cfg.c_lo) * static_cast<double>(s) / samples;
    if (const auto v = f(c)) {
      xs.push_back(c);
      fs.push_back(*v);
    }
  }
  if (xs.size() < 2) return pt;
  const int n = static_cast<int>(xs.size()) - 1;
  bool monotone = true;
  for (int s = 0; s < n; ++s)
    if (fs[s + 1] < fs[s] - kTieTolerance) monotone = false;
  if (!monotone && non_monotone) *non_monotone = true;

  bool all_tie = true;
  for (double v : fs)
    if (std::abs(v) > kTieTolerance) all_tie = false;
  if (all_tie) {
    pt.status = PointStatus::NoCrossing;
    pt.preference = Preference::Tie;
    return pt;
  }

  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  if (monotone) {
    if (fs.front() > kTieTolerance) {
      pt.status = PointStatus::NoCrossing;
      pt.preference = Preference::Second;
      return pt;
    }
    if (fs.back() < -kTieTolerance) {
      pt.status = PointStatus::NoCrossing;
      pt.preference = Preference::First;
      return pt;
    }
    lo = xs.front();
    hi = xs.back();
    bracketed = true;
  } else {
    for (int s = 0; s < n && !bracketed; ++s) {
      if (fs[s] < 0.0 && fs[s + 1] >= 0.0) {
        lo = xs[s];
        hi = xs[s + 1];
        bracketed = true;
      }
    }
    if (!bracketed) {
      pt.status = PointStatus::NoCrossing;
      pt.preference = fs.front() > 0.0 ? Preference::Second : Preference::First;
      return pt;
    }
  }

  // Invariant: f(lo) < 0 <= f(hi), up to ties at the ends.
  // Bisect well past solver_tolerance so the residual stays small as well.
  for (int it = 0; it < 200 && hi - lo > std::min(cfg.solver_tolerance, 1e-13); ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto v = f(mid);
    if (!v) return LinePoint{c_x, std::nullopt, PointStatus::Undefined, std::nullopt};
    if (*v < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  pt.status = PointStatus::Crossing;
  pt.c_y = 0.5 * (lo + hi);
  pt.preference = Preference::Tie;
  return pt;
}

inline DiscriminationLine discrimination_line(const MeasureRef& ref, std::size_t k, double p,
                                              const LineConfig& cfg = {}) {
  if (k < 2) throw Error(ErrorCode::InvalidInput, "discrimination line needs k >= 2, got k=" + std::to_string(k));
  if (scope(ref.kind) == Scope::ClassSpecific) {
    if (!ref.cls) {
      throw Error(ErrorCode::InvalidInput, "measure '" + std::string(name(ref.kind)) + "' needs a class index");
    }
    if (*ref.cls >= k) {
      throw Error(ErrorCode::InvalidInput,
                  "class index " + std::to_string(*ref.cls + 1) + " out of range 1.." + std::to_string(k));
    }
  }
  DiscriminationLine line{ref, p, k, cfg.c_lo, {}, false};
  const std::vector<double> pi = class_proportions(k, p);
  for (double c_x : make_grid(cfg.grid_step, cfg.c_lo))
    line.points.push_back(solve_line_point(ref, pi, c_x, cfg, &line.non_monotone));
  return line;
}

using MatrixPair = std::pair<ConfusionMatrix, ConfusionMatrix>;

/// Every (X(c_x), Y(c_y)) combination over the grid.
inline std::vector<MatrixPair> series_pairs(std::size_t k, double p, double grid_step = 0.01, double c_lo = 0.0) {
  const std::vector<double> pi = class_proportions(k, p);
  const std::vector<double> grid = make_grid(grid_step, c_lo);
  std::vector<ConfusionMatrix> xs, ys;
  for (double c : grid) {
    xs.push_back(series_matrix(pi, c, DropMode::AllClasses));
    ys.push_back(series_matrix(pi, c, DropMode::FirstClassOnly));
  }
  std::vector<MatrixPair> out;
  out.reserve(grid.size() * grid.size());
  for (const auto& x : xs)
    for (const auto& y : ys) out.emplace_back(x, y);
  return out;
}

struct ConcordanceResult {
  MeasureRef first;
  MeasureRef second;
  std::size_t total = 0;          // comparable pairs
  std::size_t concordant = 0;
  std::size_t not_comparable = 0;  // pairs where either measure is undefined

  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(concordant) / static_cast<double>(total);
  }
};

namespace detail {

inline std::optional<Preference> try_preference(const MeasureRef& ref, const MatrixPair& pair) {
  const auto a = evaluate(ref, pair.first);
  const auto b = evaluate(ref, pair.second);
  if (!a || !b) return std::nullopt;
  return compare_values(*a, *b);
}

}  // namespace detail

/// Rank concordance of two measures: a pair is concordant when both give the
/// same verdict (ties only match ties).
inline ConcordanceResult consistency(const MeasureRef& a, const MeasureRef& b,
                                     const std::vector<MatrixPair>& pairs) {
  ConcordanceResult r{a, b};
  for (const auto& pair : pairs) {
    const auto pa = detail::try_preference(a, pair);
    const auto pb = detail::try_preference(b, pair);
    if (!pa || !pb) {
      ++r.not_comparable;
      continue;
    }
    ++r.total;
    if (*pa == *pb) ++r.concordant;
  }
  return r;
}

struct EquivalenceResult {
  std::vector<std::vector<MeasureRef>> classes;  // in order of first appearance
  std::size_t comparable_pairs = 0;                // pairs where every measure is defined
  std::size_t total_pairs = 0;
};

/// Groups measures by the transitive closure of full concordance over `pairs`.
/// Only pairs on which every measure is defined are used.
inline EquivalenceResult equivalence_classes(const std::vector<MeasureRef>& refs,
                                             const std::vector<MatrixPair>& pairs) {
  if (refs.empty()) throw Error(ErrorCode::InvalidInput, "no measures given");
  const std::size_t n = refs.size();
  std::vector<std::vector<Preference>> verdicts(n);
  EquivalenceResult out;
  out.total_pairs = pairs.size();
  for (const auto& pair : pairs) {
    std::vector<Preference> row;
    row.reserve(n);
    for (const auto& ref : refs) {
      const auto v = detail::try_preference(ref, pair);
      if (!v) break;
      row.push_back(*v);
    }
    if (row.size() != n) continue;
    ++out.comparable_pairs;
    for (std::size_t r = 0; r < n; ++r) verdicts[r].push_back(row[r]);
  }
  if (out.comparable_pairs == 0) {
    throw Error(ErrorCode::InsufficientData, "no pair is comparable under every measure");
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (verdicts[a] == verdicts[b]) parent[find(b)] = find(a);

  std::map<std::size_t, std::size_t> slot;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t root = find(r);
    auto [it, inserted] = slot.try_emplace(root, out.classes.size());
    if (inserted) out.classes.emplace_back();
    out.classes[it->second].push_back(refs[r]);
  }
  return out;
}

}  // namespace cmeval
