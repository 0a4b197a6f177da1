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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cmeval/discrimination.hpp"
#include "cmeval/error.hpp"
#include "cmeval/matrix.hpp"
#include "cmeval/measures.hpp"
#include "cmeval/gt_index.hpp"

namespace cmeval::io {

enum class Format { Auto, Csv, Json };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  if (s.empty() || s == "auto") return Format::Auto;
  throw Error(ErrorCode::InvalidInput, "--format: expected csv or json, got '" + std::string(s) + "'");
}

/// Where a matrix comes from and how to read it.
struct MatrixDocument {
  std::filesystem::path path;
  Format format = Format::Auto;
  bool transpose = false;  // file has true classes on rows
  bool counts = false;     // integer counts rather than proportions
  bool normalize = false;  // rescale proportions that do not sum to one
};

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "--input: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ConfusionMatrix build(const std::vector<std::vector<double>>& grid, const MatrixDocument& doc) {
  ConfusionMatrix m = [&] {
    if (!doc.counts) return ConfusionMatrix::from_proportions(grid, doc.normalize);
    std::vector<std::vector<std::int64_t>> counts(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid[i].size(); ++j) {
        const double v = grid[i][j];
        if (v != std::floor(v) || std::abs(v) > 9e15) {
          throw Error(ErrorCode::InvalidInput, "row " + std::to_string(i + 1) + ", column " +
                                                   std::to_string(j + 1) + ": count " + format_number(v) +
                                                   " is not an integer");
        }
        counts[i].push_back(static_cast<std::int64_t>(v));
      }
    }
    return ConfusionMatrix::from_counts(counts);
  }();
  return doc.transpose ? m.transposed() : m;
}

}  // namespace detail

/// Parses k lines of k comma-separated numbers. Blank lines and lines starting
/// with '#' are skipped; a first line whose first field is not numeric is a header.
inline std::vector<std::vector<double>> parse_csv_grid(std::string_view text) {
  std::vector<std::vector<double>> grid;
  std::size_t line_no = 0;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = detail::split(t, ',');
    if (first) {
      first = false;
      if (!detail::to_double(fields.front())) continue;  // header
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto v = detail::to_double(fields[c]);
      if (!v) {
        throw Error(ErrorCode::InvalidInput, "line " + std::to_string(line_no) + ", column " +
                                                 std::to_string(c + 1) + ": '" + std::string(fields[c]) +
                                                 "' is not a number");
      }
      row.push_back(*v);
    }
    grid.push_back(std::move(row));
  }
  if (grid.empty()) throw Error(ErrorCode::InvalidInput, "no matrix rows found");
  return grid;
}

/// Accepts a bare array of rows, or an object with a "cells" or "counts" array.
inline std::vector<std::vector<double>> parse_json_grid(std::string_view text, bool* counts_hint = nullptr) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("JSON parse error: ") + e.what());
  }
  if (j.is_object()) {
    if (j.contains("counts")) {
      if (counts_hint) *counts_hint = true;
      j = j["counts"];
    } else if (j.contains("cells")) {
      j = j["cells"];
    } else {
      throw Error(ErrorCode::InvalidInput, "JSON object needs a \"cells\" or \"counts\" array");
    }
  }
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "JSON matrix must be an array of rows");
  std::vector<std::vector<double>> grid;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) throw Error(ErrorCode::InvalidInput, "JSON row " + std::to_string(i + 1) + " is not an array");
    std::vector<double> row;
    for (std::size_t c = 0; c < j[i].size(); ++c) {
      if (!j[i][c].is_number()) {
        throw Error(ErrorCode::InvalidInput, "JSON row " + std::to_string(i + 1) + ", column " +
                                                 std::to_string(c + 1) + " is not a number");
      }
      row.push_back(j[i][c].get<double>());
    }
    grid.push_back(std::move(row));
  }
  return grid;
}

inline ConfusionMatrix parse_matrix_text(std::string_view text, MatrixDocument doc) {
  if (doc.format == Format::Json) {
    bool counts = false;
    auto grid = parse_json_grid(text, &counts);
    doc.counts = doc.counts || counts;
    return detail::build(grid, doc);
  }
  return detail::build(parse_csv_grid(text), doc);
}

inline ConfusionMatrix parse_matrix(MatrixDocument doc) {
  if (doc.format == Format::Auto) doc.format = doc.path.extension() == ".json" ? Format::Json : Format::Csv;
  return parse_matrix_text(detail::read_file(doc.path), doc);
}

inline std::string matrix_to_csv(const ConfusionMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.k(); ++i) {
    for (std::size_t j = 0; j < m.k(); ++j) {
      if (j) out += ',';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::json value_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline nlohmann::json report_json(const MeasureReport& r) {
  nlohmann::json j;
  j["k"] = r.k;
  nlohmann::json cls = nlohmann::json::object();
  for (std::size_t row = 0; row < r.class_kinds.size(); ++row) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : r.per_class[row]) values.push_back(value_json(v.value));
    cls[std::string(name(r.class_kinds[row]))] = values;
  }
  j["class_specific"] = cls;
  nlohmann::json multi = nlohmann::json::object();
  for (const auto& v : r.overall) multi[std::string(name(v.kind))] = value_json(v.value);
  j["multiclass"] = multi;
  return j;
}

inline std::string display(const std::optional<double>& v) {
  if (!v) return "undef";
  char buf[32];
  const double r = round_half_up(*v, 2);
  std::snprintf(buf, sizeof buf, "%.2f", r == 0.0 ? 0.0 : r);
  return buf;
}

/// Text table: one row per measure, one column per class plus "Multi.".
inline std::string report_table(const MeasureReport& r) {
  std::ostringstream os;
  auto cell = [&](const std::string& s) {
    os << ' ';
    for (std::size_t pad = s.size(); pad < 7; ++pad) os << ' ';
    os << s;
  };
  os << "measure   ";
  for (std::size_t i = 0; i < r.k; ++i) cell("Cls." + std::to_string(i + 1));
  cell("Multi.");
  os << '\n';
  auto label = [&](std::string_view n) {
    std::string s(n);
    s.resize(10, ' ');
    os << s;
  };
  label(name(MeasureKind::OSR));
  for (std::size_t i = 0; i < r.k; ++i) cell("-");
  cell(display(r.get(MeasureKind::OSR)));
  os << '\n';
  for (std::size_t row = 0; row < r.class_kinds.size(); ++row) {
    const MeasureKind kind = r.class_kinds[row];
    label(kind == MeasureKind::ICSI ? "(i)csi" : name(kind));
    for (const auto& v : r.per_class[row]) cell(display(v.value));
    cell(kind == MeasureKind::ICSI ? display(r.get(MeasureKind::CSI)) : "-");
    os << '\n';
  }
  // CSI already shares the ICSI row.
  for (const auto& v : r.overall) {
    if (v.kind == MeasureKind::OSR || v.kind == MeasureKind::CSI) continue;
    label(name(v.kind));
    for (std::size_t i = 0; i < r.k; ++i) cell("-");
    cell(display(v.value));
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json gt_json(const GtIndexResult& g) {
  nlohmann::json j;
  nlohmann::json theta = nlohmann::json::array();
  for (const auto& t : g.theta) theta.push_back(value_json(t));
  j["theta"] = theta;
  j["a"] = g.fit.a;
  j["b"] = g.fit.b;
  j["iterations"] = g.fit.iterations;
  j["residual"] = g.fit.residual;
  j["misfit"] = g.fit.misfit;
  return j;
}

// ---------------------------------------------------------------------------
// Discrimination-line CSV: c_x,c_y,crossing,preference

inline constexpr std::string_view kLineHeader = "c_x,c_y,crossing,preference";

inline std::string line_to_csv(const DiscriminationLine& line) {
  std::string out(kLineHeader);
  out += '\n';
  for (const auto& pt : line.points) {
    out += format_number(pt.c_x);
    out += ',';
    if (pt.c_y) out += format_number(*pt.c_y);
    out += pt.status == PointStatus::Crossing ? ",1," : ",0,";
    out += pt.preference ? std::string(to_string(*pt.preference)) : std::string("na");
    out += '\n';
  }
  return out;
}

inline std::vector<LinePoint> parse_line_csv(std::string_view text) {
  std::vector<LinePoint> points;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty() || t == kLineHeader) continue;
    const auto f = detail::split(t, ',');
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (f.size() != 4) throw Error(ErrorCode::InvalidInput, where + "expected 4 fields, got " + std::to_string(f.size()));
    LinePoint pt;
    const auto cx = detail::to_double(f[0]);
    if (!cx) throw Error(ErrorCode::InvalidInput, where + "c_x '" + std::string(f[0]) + "' is not a number");
    pt.c_x = *cx;
    if (!f[1].empty()) {
      pt.c_y = detail::to_double(f[1]);
      if (!pt.c_y) throw Error(ErrorCode::InvalidInput, where + "c_y '" + std::string(f[1]) + "' is not a number");
    }
    if (f[2] != "0" && f[2] != "1") {
      throw Error(ErrorCode::InvalidInput, where + "crossing '" + std::string(f[2]) + "' must be 0 or 1");
    }
    if (f[3] == "first") {
      pt.preference = Preference::First;
    } else if (f[3] == "second") {
      pt.preference = Preference::Second;
    } else if (f[3] == "tie") {
      pt.preference = Preference::Tie;
    } else if (f[3] != "na") {
      throw Error(ErrorCode::InvalidInput, where + "preference '" + std::string(f[3]) + "' is not first|second|tie|na");
    }
    if (f[2] == "1") {
      pt.status = PointStatus::Crossing;
    } else {
      pt.status = pt.preference ? PointStatus::NoCrossing : PointStatus::Undefined;
    }
    points.push_back(pt);
  }
  return points;
}

}  // namespace cmeval::io
