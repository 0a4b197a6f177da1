// Copyright 2026 The cmeval Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cmeval/cli.hpp"
#include "fixtures.hpp"

namespace cmeval {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cmeval_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::ofstream(p) << content;
    return p;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "cmeval");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, ParseCsvProportions) {
  const auto p = write("t6.csv", "0.30,0.12,0.02\n0.02,0.19,0.01\n0.01,0.03,0.30\n");
  const auto m = io::parse_matrix({p});
  for (std::size_t n = 0; n < 9; ++n) EXPECT_NEAR(m.cells()[n], testing::classifier_a().cells()[n], 1e-15);
  io::MatrixDocument doc{p};
  doc.transpose = true;
  const auto t = io::parse_matrix(doc);
  EXPECT_EQ(t(0, 1), 0.02);
  EXPECT_EQ(t(1, 0), 0.12);
}

TEST_F(CliTest, ParseCsvCountsWithHeader) {
  const auto p = write("t4.csv", "C1,C2,C3\n33,0,0\n0,34,0\n\n0,0,33\n");
  io::MatrixDocument doc{p};
  doc.counts = true;
  EXPECT_EQ(io::parse_matrix(doc), testing::perfect());
}

TEST_F(CliTest, ParseJson) {
  const auto a = write("a.json", "[[0.3,0.12,0.02],[0.02,0.19,0.01],[0.01,0.03,0.30]]");
  EXPECT_NEAR(io::parse_matrix({a})(1, 1), 0.19, 1e-15);
  const auto b = write("b.json", R"({"counts": [[33,0,0],[0,34,0],[0,0,33]]})");
  EXPECT_EQ(io::parse_matrix({b}), testing::perfect());
}

TEST_F(CliTest, ParseErrorsCarryPositions) {
  auto message = [&](const std::string& content, bool counts = false) {
    io::MatrixDocument doc{write("bad.csv", content)};
    doc.counts = counts;
    try {
      io::parse_matrix(doc);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("0.5,0.5\n0.0,abc\n").find("line 2, column 2"), std::string::npos);
  EXPECT_NE(message("0.5,0.5\n0.0\n").find("row 2"), std::string::npos);
  EXPECT_NE(message("0.5,0.1\n-0.1,0.5\n").find("cell (2,1)"), std::string::npos);
  EXPECT_NE(message("0.5,0.5\n0.5,0.5\n").find("sum to 1"), std::string::npos);
  EXPECT_NE(message("1,2\n3,4.5\n", true).find("row 2, column 2"), std::string::npos);
}

TEST_F(CliTest, MeasureReproducesReportTable) {
  const auto in = write("t6.csv", "0.30,0.12,0.02\n0.02,0.19,0.01\n0.01,0.03,0.30\n");
  const auto json_path = dir_ / "report.json";
  ASSERT_EQ(run({"measure", "--input", in.string(), "--output", json_path.string()}), 0) << err_.str();
  EXPECT_NE(out_.str().find("0.91"), std::string::npos);
  const auto j = nlohmann::json::parse(read(json_path));
  EXPECT_NEAR(j["multiclass"]["osr"].get<double>(), 0.79, 1e-12);
  EXPECT_NEAR(j["class_specific"]["tpr"][1].get<double>(), 0.56, 0.006);
  EXPECT_NEAR(j["multiclass"]["ckc"].get<double>(), 0.69, 0.006);
}

TEST_F(CliTest, MeasureKeepsUndefinedCells) {
  const auto in = write("m.csv", "5,0,2\n0,0,0\n1,0,2\n");
  const auto json_path = dir_ / "r.json";
  ASSERT_EQ(run({"measure", "--input", in.string(), "--counts", "--output", json_path.string()}), 0);
  EXPECT_NE(out_.str().find("undef"), std::string::npos);
  const auto j = nlohmann::json::parse(read(json_path));
  EXPECT_TRUE(j["class_specific"]["tpr"][1].is_null());
  EXPECT_TRUE(j["multiclass"]["csi"].is_null());
}

TEST_F(CliTest, GenerateRoundTrips) {
  const auto out = dir_ / "series";
  ASSERT_EQ(run({"generate", "--k", "4", "--p", "0.7", "--grid-step", "0.1", "--output", out.string()}), 0)
      << err_.str();
  const auto pi = class_proportions(4, 0.7);
  const auto grid = make_grid(0.1);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    char name[32];
    std::snprintf(name, sizeof name, "y_%04zu.csv", n);
    const auto parsed = io::parse_matrix({out / name});
    const auto expected = series_matrix(pi, grid[n], DropMode::FirstClassOnly);
    for (std::size_t c = 0; c < 16; ++c) {
      const double rounded = std::stod(io::format_number(expected.cells()[c]));
      ASSERT_EQ(parsed.cells()[c], rounded);
    }
  }
  EXPECT_TRUE(fs::exists(out / "x_0010.csv"));
  EXPECT_NE(read(out / "series.csv").find("x,3,0.3,x_0003.csv"), std::string::npos);
}

TEST_F(CliTest, DiscriminateOsrMatchesClosedForm) {
  ASSERT_EQ(run({"discriminate", "--measure", "osr", "--k", "3", "--p", "0"}), 0) << err_.str();
  std::istringstream csv(out_.str());
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "c_x,c_y,crossing,preference");
  int crossings = 0;
  const auto points = io::parse_line_csv(out_.str());
  ASSERT_EQ(points.size(), 101u);
  for (const auto& pt : points) {
    if (pt.status == PointStatus::Crossing) {
      ++crossings;
      EXPECT_NEAR(*pt.c_y, 3 * pt.c_x - 2, 1e-6);
    } else {
      EXPECT_EQ(pt.preference, Preference::Second);
    }
  }
  EXPECT_EQ(crossings, 34);
}

TEST_F(CliTest, DiscriminateWritesFilesAndSvg) {
  const auto csv = dir_ / "f1.csv";
  const auto svg = dir_ / "f1.svg";
  ASSERT_EQ(run({"discriminate", "--measure", "f", "--class", "1", "--p", "0.5", "--output", csv.string(),
                 "--svg", svg.string()}),
            0)
      << err_.str();
  const auto text = read(svg);
  EXPECT_NE(text.find("<polyline"), std::string::npos);
  EXPECT_NE(text.find("class=\"diagonal\""), std::string::npos);
  EXPECT_EQ(io::parse_line_csv(read(csv)).size(), 101u);
}

TEST_F(CliTest, EquivalenceImbalanced) {
  ASSERT_EQ(run({"equivalence", "--kinds", "osr,ckc,spc,mre,csi", "--k", "3", "--p", "0.5"}), 0) << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["classes"], nlohmann::json::parse(R"([["osr","spc","mre"],["ckc"],["csi"]])"));
  EXPECT_EQ(j["pairs"].get<int>(), 101 * 101);
}

TEST_F(CliTest, PlotCombinesLines) {
  ASSERT_EQ(run({"discriminate", "--measure", "osr", "--output", (dir_ / "osr.csv").string()}), 0);
  ASSERT_EQ(run({"discriminate", "--measure", "csi", "--output", (dir_ / "csi.csv").string()}), 0);
  const auto svg = dir_ / "plot.svg";
  ASSERT_EQ(run({"plot", "--input", (dir_ / "osr.csv").string(), "--input", (dir_ / "csi.csv").string(), "--svg",
                 svg.string()}),
            0)
      << err_.str();
  const auto text = read(svg);
  std::regex poly("<polyline");
  EXPECT_EQ(std::distance(std::sregex_iterator(text.begin(), text.end(), poly), std::sregex_iterator()), 2);
  EXPECT_NE(text.find(">osr<"), std::string::npos);
  EXPECT_NE(text.find(">csi<"), std::string::npos);
  // All coordinates stay inside the plotting square [60, 440] x [40, 420].
  std::regex pt("([0-9.]+),([0-9.]+)");
  const auto start = text.find("points=\"");
  const auto stop = text.find('"', start + 8);
  const std::string pts = text.substr(start + 8, stop - start - 8);
  for (auto it = std::sregex_iterator(pts.begin(), pts.end(), pt); it != std::sregex_iterator(); ++it) {
    const double x = std::stod((*it)[1]), y = std::stod((*it)[2]);
    EXPECT_GE(x, 60.0);
    EXPECT_LE(x, 440.0);
    EXPECT_GE(y, 40.0);
    EXPECT_LE(y, 420.0);
  }
}

TEST_F(CliTest, OutputsAreDeterministic) {
  ASSERT_EQ(run({"discriminate", "--measure", "ckc", "--p", "0.3"}), 0);
  const std::string first = out_.str();
  ASSERT_EQ(run({"discriminate", "--measure", "ckc", "--p", "0.3"}), 0);
  EXPECT_EQ(out_.str(), first);
  ASSERT_EQ(run({"equivalence", "--p", "0.2", "--grid-step", "0.1"}), 0);
  const std::string eq = out_.str();
  ASSERT_EQ(run({"equivalence", "--p", "0.2", "--grid-step", "0.1"}), 0);
  EXPECT_EQ(out_.str(), eq);
}

TEST_F(CliTest, GtReport) {
  const auto in = write("t6.csv", "30,12,2\n2,19,1\n1,3,30\n");
  ASSERT_EQ(run({"gt", "--input", in.string(), "--counts"}), 0) << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["theta"].size(), 3u);
  EXPECT_TRUE(j.contains("residual"));
  const auto two = write("two.csv", "0.4,0.1\n0.2,0.3\n");
  EXPECT_EQ(run({"gt", "--input", two.string()}), 2);
  EXPECT_NE(err_.str().find("TooFewClasses"), std::string::npos);
}

TEST_F(CliTest, ErrorsNameTheParameter) {
  EXPECT_EQ(run({"discriminate", "--measure", "osr", "--p", "1.5"}), 2);
  EXPECT_NE(err_.str().find("--p"), std::string::npos);
  EXPECT_NE(err_.str().find("1.5"), std::string::npos);

  EXPECT_EQ(run({"discriminate", "--measure", "nope"}), 2);
  EXPECT_NE(err_.str().find("--measure"), std::string::npos);
  EXPECT_NE(err_.str().find("nope"), std::string::npos);

  EXPECT_EQ(run({"discriminate", "--measure", "tpr", "--class", "4"}), 2);
  EXPECT_NE(err_.str().find("--class"), std::string::npos);

  EXPECT_EQ(run({"discriminate", "--measure", "tpr"}), 2);
  EXPECT_NE(err_.str().find("--class"), std::string::npos);

  EXPECT_EQ(run({"equivalence", "--kinds", "osr,auc"}), 2);
  EXPECT_NE(err_.str().find("auc"), std::string::npos);

  EXPECT_EQ(run({"generate", "--k", "1", "--output", (dir_ / "x").string()}), 2);
  EXPECT_NE(err_.str().find("--k"), std::string::npos);

  EXPECT_EQ(run({"measure", "--input", (dir_ / "missing.csv").string()}), 2);
  EXPECT_NE(err_.str().find("missing.csv"), std::string::npos);

  EXPECT_EQ(run({"bogus"}), 1);
  const auto j = nlohmann::json::parse(err_.str());
  EXPECT_EQ(j["error"], "UsageError");
}

}  // namespace
}  // namespace cmeval
