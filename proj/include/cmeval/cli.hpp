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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmeval/discrimination.hpp"
#include "cmeval/error.hpp"
#include "cmeval/gt_index.hpp"
#include "cmeval/io.hpp"
#include "cmeval/measures.hpp"
#include "cmeval/series.hpp"
#include "cmeval/svg.hpp"

namespace cmeval::cli {

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "--output: cannot write '" + path.string() + "'");
  out << content;
}

inline void emit(const std::string& output, const std::string& content, std::ostream& out) {
  if (output.empty()) {
    out << content;
  } else {
    write_file(output, content);
  }
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct SeriesFlags {
  int k = 3;
  double p = 0.0;
  double grid_step = 0.01;
  double c_lo = 0.0;

  void add_to(CLI::App* app) {
    app->add_option("--k", k, "Number of classes");
    app->add_option("--p", p, "Imbalance coefficient in [0, 1]");
    app->add_option("--grid-step", grid_step, "Spacing of the retention grid");
    app->add_option("--c-lo", c_lo, "Lower bound of the retention grid");
  }

  void check() const {
    if (k < 2 || k > 60) throw Error(ErrorCode::InvalidInput, "--k: value " + std::to_string(k) + " outside [2, 60]");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidInput, "--p: value " + io::format_number(p) + " outside [0, 1]");
    if (!(grid_step > 0.0 && grid_step <= 1.0)) {
      throw Error(ErrorCode::InvalidInput, "--grid-step: value " + io::format_number(grid_step) + " outside (0, 1]");
    }
    if (!(c_lo >= 0.0 && c_lo < 1.0)) {
      throw Error(ErrorCode::InvalidInput, "--c-lo: value " + io::format_number(c_lo) + " outside [0, 1)");
    }
  }
};

struct InputFlags {
  std::string input;
  std::string format;
  bool counts = false;
  bool transpose = false;

  void add_to(CLI::App* app) {
    app->add_option("--input", input, "Confusion matrix file (rows = estimated classes)")->required();
    app->add_option("--format", format, "Input format: csv or json (default: from extension)");
    app->add_flag("--counts", counts, "Input holds instance counts");
    app->add_flag("--transpose", transpose, "Input has true classes on rows");
  }

  ConfusionMatrix read() const {
    io::MatrixDocument doc;
    doc.path = input;
    doc.format = io::parse_format(format);
    doc.counts = counts;
    doc.transpose = transpose;
    return io::parse_matrix(doc);
  }
};

inline std::vector<MeasureKind> parse_kinds(const std::string& list) {
  std::vector<MeasureKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = io::detail::trim(item);
    if (t.empty()) continue;
    try {
      out.push_back(parse_measure_kind(t));
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidInput, "--kinds: unknown measure '" + std::string(t) + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, "--kinds: empty list '" + list + "'");
  return out;
}

inline MeasureRef make_ref(MeasureKind kind, std::optional<int> cls, int k) {
  MeasureRef ref{kind, std::nullopt};
  if (scope(kind) == Scope::ClassSpecific) {
    if (!cls) {
      throw Error(ErrorCode::InvalidInput,
                  "--class: required for class-specific measure '" + std::string(name(kind)) + "'");
    }
    if (*cls < 1 || *cls > k) {
      throw Error(ErrorCode::InvalidInput,
                  "--class: value " + std::to_string(*cls) + " outside [1, " + std::to_string(k) + "]");
    }
    ref.cls = static_cast<std::size_t>(*cls - 1);
  }
  return ref;
}

inline std::string error_json(std::string_view code, const std::string& message) {
  nlohmann::json j;
  j["error"] = code;
  j["message"] = message;
  return j.dump();
}

}  // namespace detail

/// Runs the command line; returns the process exit status.
/// Errors are reported on `err` as a single JSON object {"error", "message"}.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Confusion-matrix accuracy measures, error series and discrimination lines", "cmeval"};
  app.require_subcommand(1);

  // measure
  auto* measure = app.add_subcommand("measure", "Compute every measure on one confusion matrix");
  detail::InputFlags measure_in;
  measure_in.add_to(measure);
  std::string measure_output;
  measure->add_option("--output", measure_output, "Write the JSON report here");

  // gt
  auto* gt = app.add_subcommand("gt", "Ground truth index and quasi-independence fit");
  detail::InputFlags gt_in;
  gt_in.add_to(gt);
  std::string gt_output;
  gt->add_option("--output", gt_output, "Write the JSON result here instead of stdout");

  // generate
  auto* generate = app.add_subcommand("generate", "Write the x and y series of controlled-error matrices");
  detail::SeriesFlags gen_flags;
  gen_flags.add_to(generate);
  std::string gen_output;
  generate->add_option("--output", gen_output, "Output directory")->required();

  // discriminate
  auto* discriminate = app.add_subcommand("discriminate", "Discrimination line of one measure");
  detail::SeriesFlags disc_flags;
  disc_flags.add_to(discriminate);
  std::string disc_measure, disc_output, disc_svg;
  std::optional<int> disc_class;
  discriminate->add_option("--measure", disc_measure, "Measure name (osr, tpr, f, ckc, ...)")->required();
  discriminate->add_option("--class", disc_class, "Class index (1-based) for class-specific measures");
  discriminate->add_option("--output", disc_output, "CSV output path (default: stdout)");
  discriminate->add_option("--svg", disc_svg, "Also render the line as SVG");

  // equivalence
  auto* equivalence = app.add_subcommand("equivalence", "Group measures that rank the series pairs identically");
  detail::SeriesFlags eq_flags;
  eq_flags.add_to(equivalence);
  std::string eq_kinds = "osr,ckc,spc,mre,csi", eq_output;
  std::optional<int> eq_class;
  equivalence->add_option("--kinds", eq_kinds, "Comma-separated measure names");
  equivalence->add_option("--class", eq_class, "Class index (1-based) for class-specific kinds");
  equivalence->add_option("--output", eq_output, "JSON output path (default: stdout)");

  // plot
  auto* plot = app.add_subcommand("plot", "Render discrimination-line CSV files as SVG");
  std::vector<std::string> plot_inputs;
  std::string plot_svg;
  plot->add_option("--input", plot_inputs, "Line CSV file(s)")->required();
  plot->add_option("--svg", plot_svg, "SVG output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << detail::error_json("UsageError", e.what()) << '\n';
    return 1;
  }

  try {
    if (*measure) {
      const MeasureReport r = report(measure_in.read());
      out << io::report_table(r);
      if (!measure_output.empty()) detail::write_file(measure_output, detail::dump(io::report_json(r)));
    } else if (*gt) {
      const ConfusionMatrix m = gt_in.read();
      detail::emit(gt_output, detail::dump(io::gt_json(gt_index(m))), out);
    } else if (*generate) {
      gen_flags.check();
      SeriesSpec spec;
      spec.k = static_cast<std::size_t>(gen_flags.k);
      spec.p = gen_flags.p;
      spec.c_lo = gen_flags.c_lo;
      spec.grid = make_grid(gen_flags.grid_step, gen_flags.c_lo);
      const std::filesystem::path dir(gen_output);
      std::string index = "series,index,c,file\n";
      for (DropMode mode : {DropMode::AllClasses, DropMode::FirstClassOnly}) {
        spec.mode = mode;
        const char* tag = mode == DropMode::AllClasses ? "x" : "y";
        const auto series = make_series(spec);
        for (std::size_t i = 0; i < series.size(); ++i) {
          char file[32];
          std::snprintf(file, sizeof file, "%s_%04zu.csv", tag, i);
          detail::write_file(dir / file, io::matrix_to_csv(series[i]));
          index += std::string(tag) + "," + std::to_string(i) + "," + io::format_number(spec.grid[i]) + "," + file + "\n";
        }
      }
      detail::write_file(dir / "series.csv", index);
      out << "wrote " << 2 * spec.grid.size() << " matrices to " << dir.string() << '\n';
    } else if (*discriminate) {
      disc_flags.check();
      MeasureKind kind;
      try {
        kind = parse_measure_kind(disc_measure);
      } catch (const Error&) {
        throw Error(ErrorCode::InvalidInput, "--measure: unknown measure '" + disc_measure + "'");
      }
      const MeasureRef ref = detail::make_ref(kind, disc_class, disc_flags.k);
      LineConfig cfg;
      cfg.grid_step = disc_flags.grid_step;
      cfg.c_lo = disc_flags.c_lo;
      const auto line = discrimination_line(ref, static_cast<std::size_t>(disc_flags.k), disc_flags.p, cfg);
      detail::emit(disc_output, io::line_to_csv(line), out);
      if (!disc_svg.empty()) {
        svg::PlotDocument doc;
        doc.title = ref.label() + " (k=" + std::to_string(disc_flags.k) + ", p=" + io::format_number(disc_flags.p) + ")";
        doc.lines.push_back(svg::to_plot_line(ref.label(), line.points));
        detail::write_file(disc_svg, svg::render(doc));
      }
    } else if (*equivalence) {
      eq_flags.check();
      std::vector<MeasureRef> refs;
      for (MeasureKind kind : detail::parse_kinds(eq_kinds)) refs.push_back(detail::make_ref(kind, eq_class, eq_flags.k));
      const auto pairs = series_pairs(static_cast<std::size_t>(eq_flags.k), eq_flags.p, eq_flags.grid_step, eq_flags.c_lo);
      const auto result = equivalence_classes(refs, pairs);
      nlohmann::json j;
      j["k"] = eq_flags.k;
      j["p"] = eq_flags.p;
      j["pairs"] = result.total_pairs;
      j["comparable_pairs"] = result.comparable_pairs;
      nlohmann::json classes = nlohmann::json::array();
      for (const auto& cls : result.classes) {
        nlohmann::json group = nlohmann::json::array();
        for (const auto& ref : cls) group.push_back(ref.label());
        classes.push_back(group);
      }
      j["classes"] = classes;
      detail::emit(eq_output, detail::dump(j), out);
    } else if (*plot) {
      svg::PlotDocument doc;
      doc.title = "Discrimination lines";
      for (const auto& path : plot_inputs) {
        const auto points = io::parse_line_csv(io::detail::read_file(path));
        doc.lines.push_back(svg::to_plot_line(std::filesystem::path(path).stem().string(), points));
      }
      detail::write_file(plot_svg, svg::render(doc));
    }
  } catch (const Error& e) {
    err << detail::error_json(to_string(e.code()), e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << detail::error_json("InternalError", e.what()) << '\n';
    return 3;
  }
  return 0;
}

}  // namespace cmeval::cli
