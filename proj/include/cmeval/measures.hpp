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
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmeval/error.hpp"
#include "cmeval/gt_index.hpp"
#include "cmeval/matrix.hpp"

namespace cmeval {

enum class MeasureKind {
  // class-specific
  TPR,
  TNR,
  PPV,
  NPV,
  FPR,
  F_MEASURE,
  JCC,
  ICSI,
  KULCZYNSKI,
  GT_INDEX,
  // multiclass
  OSR,
  CSI,
  COHEN_KAPPA,
  SCOTT_PI,
  MAXWELL_RE,
};

enum class Scope { ClassSpecific, Multiclass };

inline constexpr std::array<MeasureKind, 10> kClassSpecificKinds = {
    MeasureKind::TPR, MeasureKind::TNR,  MeasureKind::PPV,  MeasureKind::NPV,        MeasureKind::FPR,
    MeasureKind::F_MEASURE, MeasureKind::JCC, MeasureKind::ICSI, MeasureKind::KULCZYNSKI,
    MeasureKind::GT_INDEX};

inline constexpr std::array<MeasureKind, 5> kMulticlassKinds = {
    MeasureKind::OSR, MeasureKind::CSI, MeasureKind::COHEN_KAPPA, MeasureKind::SCOTT_PI,
    MeasureKind::MAXWELL_RE};

inline constexpr Scope scope(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::OSR:
    case MeasureKind::CSI:
    case MeasureKind::COHEN_KAPPA:
    case MeasureKind::SCOTT_PI:
    case MeasureKind::MAXWELL_RE:
      return Scope::Multiclass;
    default:
      return Scope::ClassSpecific;
  }
}

/// Short lowercase name, also accepted by parse_measure_kind.
inline std::string_view name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::TPR: return "tpr";
    case MeasureKind::TNR: return "tnr";
    case MeasureKind::PPV: return "ppv";
    case MeasureKind::NPV: return "npv";
    case MeasureKind::FPR: return "fpr";
    case MeasureKind::F_MEASURE: return "f";
    case MeasureKind::JCC: return "jcc";
    case MeasureKind::ICSI: return "icsi";
    case MeasureKind::KULCZYNSKI: return "kulczynski";
    case MeasureKind::GT_INDEX: return "gt";
    case MeasureKind::OSR: return "osr";
    case MeasureKind::CSI: return "csi";
    case MeasureKind::COHEN_KAPPA: return "ckc";
    case MeasureKind::SCOTT_PI: return "spc";
    case MeasureKind::MAXWELL_RE: return "mre";
  }
  return "?";
}

inline MeasureKind parse_measure_kind(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  for (MeasureKind k : kClassSpecificKinds)
    if (s == name(k)) return k;
  for (MeasureKind k : kMulticlassKinds)
    if (s == name(k)) return k;
  if (s == "f_measure" || s == "f-measure" || s == "fmeasure" || s == "f1") return MeasureKind::F_MEASURE;
  if (s == "ckp" || s == "kappa" || s == "cohen_kappa") return MeasureKind::COHEN_KAPPA;
  if (s == "pi" || s == "scott_pi") return MeasureKind::SCOTT_PI;
  if (s == "maxwell_re") return MeasureKind::MAXWELL_RE;
  if (s == "gt_index" || s == "gti") return MeasureKind::GT_INDEX;
  throw Error(ErrorCode::InvalidInput, "unknown measure kind '" + std::string(text) + "'");
}

struct Range {
  double lo;
  double hi;
};

/// Attainable range of a measure on a k-class matrix.
inline Range range(MeasureKind kind, std::size_t k) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case MeasureKind::ICSI:
    case MeasureKind::CSI:
      return {-1.0, 1.0};
    case MeasureKind::MAXWELL_RE:
      return {-1.0 / static_cast<double>(k - 1), 1.0};
    case MeasureKind::COHEN_KAPPA:
    case MeasureKind::SCOTT_PI:
    case MeasureKind::GT_INDEX:
      return {-inf, 1.0};
    default:
      return {0.0, 1.0};
  }
}

/// A measure value, or undefined when a rate has a zero denominator.
struct MeasureValue {
  MeasureKind kind;
  std::optional<std::size_t> cls;  // empty for multiclass kinds
  std::optional<double> value;

  bool defined() const noexcept { return value.has_value(); }
};

/// Observed and chance agreement proportions.
struct AgreementDecomposition {
  double po;
  double pe;
};

/// Chance-corrected agreement (po - pe) / (1 - pe).
inline double agreement(AgreementDecomposition d) {
  if (!(d.pe < 1.0)) {
    throw Error(ErrorCode::DegenerateChance,
                "expected agreement pe=" + std::to_string(d.pe) + " leaves no room for correction");
  }
  return (d.po - d.pe) / (1.0 - d.pe);
}

namespace detail {

inline std::optional<double> ratio(double num, double den) {
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

inline std::optional<double> rate(const BinaryCounts& bc, MeasureKind kind) {
  switch (kind) {
    case MeasureKind::TPR: return ratio(bc.tp, bc.tp + bc.fn);
    case MeasureKind::TNR: return ratio(bc.tn, bc.tn + bc.fp);
    case MeasureKind::PPV: return ratio(bc.tp, bc.tp + bc.fp);
    case MeasureKind::NPV: return ratio(bc.tn, bc.tn + bc.fn);
    case MeasureKind::FPR: {
      auto tnr = ratio(bc.tn, bc.tn + bc.fp);
      if (!tnr) return std::nullopt;
      return 1.0 - *tnr;
    }
    case MeasureKind::F_MEASURE: return ratio(2.0 * bc.tp, 2.0 * bc.tp + bc.fn + bc.fp);
    case MeasureKind::JCC: return ratio(bc.tp, bc.tp + bc.fp + bc.fn);
    case MeasureKind::ICSI:
    case MeasureKind::KULCZYNSKI: {
      auto tpr = ratio(bc.tp, bc.tp + bc.fn);
      auto ppv = ratio(bc.tp, bc.tp + bc.fp);
      if (!tpr || !ppv) return std::nullopt;
      return kind == MeasureKind::ICSI ? *ppv + *tpr - 1.0 : 0.5 * (*tpr + *ppv);
    }
    default:
      return std::nullopt;
  }
}

inline std::optional<double> csi(const ConfusionMatrix& m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i) {
    auto v = rate(class_counts(m, i), MeasureKind::ICSI);
    if (!v) return std::nullopt;
    sum += *v;
  }
  return sum / static_cast<double>(m.k());
}

}  // namespace detail

/// Chance agreement pe of the three agreement coefficients.
/// Scott's class proportions are the column marginals of `m`.
inline double expected_agreement(const ConfusionMatrix& m, MeasureKind kind) {
  const Marginals mg = marginals(m);
  double pe = 0.0;
  switch (kind) {
    case MeasureKind::COHEN_KAPPA:
      for (std::size_t i = 0; i < m.k(); ++i) pe += mg.rows[i] * mg.cols[i];
      return pe;
    case MeasureKind::SCOTT_PI:
      for (double p : mg.cols) pe += p * p;
      return pe;
    case MeasureKind::MAXWELL_RE:
      return 1.0 / static_cast<double>(m.k());
    default:
      throw Error(ErrorCode::InvalidInput,
                  "measure '" + std::string(name(kind)) + "' is not an agreement coefficient");
  }
}

/// Evaluates a class-specific measure for class `cls`.
/// Zero denominators yield an undefined value, never 0.
inline MeasureValue class_measure(const ConfusionMatrix& m, std::size_t cls, MeasureKind kind) {
  if (scope(kind) != Scope::ClassSpecific) {
    throw Error(ErrorCode::InvalidInput,
                "measure '" + std::string(name(kind)) + "' is multiclass; no class index applies");
  }
  check_class(m, cls);
  MeasureValue out{kind, cls, std::nullopt};
  if (kind == MeasureKind::GT_INDEX) {
    try {
      out.value = gt_index(m).theta[cls];
    } catch (const Error&) {
      // k < 3, perfect classification or no convergence: undefined.
    }
    return out;
  }
  out.value = detail::rate(class_counts(m, cls), kind);
  return out;
}

/// Evaluates a multiclass measure. Throws DegenerateChance when pe = 1.
inline MeasureValue overall_measure(const ConfusionMatrix& m, MeasureKind kind) {
  if (scope(kind) != Scope::Multiclass) {
    throw Error(ErrorCode::InvalidInput,
                "measure '" + std::string(name(kind)) + "' is class-specific; a class index is required");
  }
  MeasureValue out{kind, std::nullopt, std::nullopt};
  switch (kind) {
    case MeasureKind::OSR:
      out.value = m.trace();
      break;
    case MeasureKind::CSI:
      out.value = detail::csi(m);
      break;
    default:
      out.value = agreement({m.trace(), expected_agreement(m, kind)});
      break;
  }
  return out;
}

/// A measure together with the class it applies to, when class-specific.
struct MeasureRef {
  MeasureKind kind;
  std::optional<std::size_t> cls;

  std::string label() const {
    std::string s(name(kind));
    if (cls) s += "_" + std::to_string(*cls + 1);
    return s;
  }
};

/// Evaluates `ref` on `m`; any measure failure maps to an undefined value.
inline std::optional<double> evaluate(const MeasureRef& ref, const ConfusionMatrix& m) {
  try {
    if (scope(ref.kind) == Scope::Multiclass) return overall_measure(m, ref.kind).value;
    if (!ref.cls) {
      throw Error(ErrorCode::InvalidInput,
                  "measure '" + std::string(name(ref.kind)) + "' needs a class index");
    }
    return class_measure(m, *ref.cls, ref.kind).value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateChance) return std::nullopt;
    throw;
  }
}

/// Half-up rounding used for display.
inline double round_half_up(double x, int decimals = 2) {
  const double scale = std::pow(10.0, decimals);
  // The small bias absorbs binary representation error (0.685 is stored as 0.68499...).
  return std::floor(x * scale + 0.5 + 1e-9) / scale;
}

/// Every measure on one matrix, laid out as a measure x class grid plus the
/// multiclass column.
struct MeasureReport {
  std::size_t k = 0;
  std::vector<MeasureKind> class_kinds;
  std::vector<std::vector<MeasureValue>> per_class;  // [kind][class]
  std::vector<MeasureValue> overall;

  std::optional<double> get(MeasureKind kind, std::size_t cls) const {
    for (std::size_t r = 0; r < class_kinds.size(); ++r)
      if (class_kinds[r] == kind) return per_class[r].at(cls).value;
    throw Error(ErrorCode::InvalidInput, "kind not in report: " + std::string(name(kind)));
  }

  std::optional<double> get(MeasureKind kind) const {
    for (const auto& v : overall)
      if (v.kind == kind) return v.value;
    throw Error(ErrorCode::InvalidInput, "kind not in report: " + std::string(name(kind)));
  }
};

inline MeasureReport report(const ConfusionMatrix& m) {
  MeasureReport r;
  r.k = m.k();
  r.class_kinds.assign(kClassSpecificKinds.begin(), kClassSpecificKinds.end());

  std::optional<GtIndexResult> gt;
  try {
    gt = gt_index(m);
  } catch (const Error&) {
  }

  for (MeasureKind kind : r.class_kinds) {
    std::vector<MeasureValue> row;
    for (std::size_t i = 0; i < m.k(); ++i) {
      if (kind == MeasureKind::GT_INDEX) {
        row.push_back({kind, i, gt ? gt->theta[i] : std::nullopt});
      } else {
        row.push_back(class_measure(m, i, kind));
      }
    }
    r.per_class.push_back(std::move(row));
  }
  for (MeasureKind kind : kMulticlassKinds) {
    MeasureValue v{kind, std::nullopt, std::nullopt};
    try {
      v = overall_measure(m, kind);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateChance) throw;
    }
    r.overall.push_back(v);
  }
  return r;
}

}  // namespace cmeval
