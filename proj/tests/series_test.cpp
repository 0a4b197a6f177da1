// Copyright 2026 The cmeval Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "cmeval/measures.hpp"
#include "cmeval/series.hpp"

namespace cmeval {
namespace {

TEST(ClassProportions, FullyImbalancedFiveClasses) {
  const auto pi = class_proportions(5, 1.0);
  const double expected[] = {16.0 / 31, 8.0 / 31, 4.0 / 31, 2.0 / 31, 1.0 / 31};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(pi[i], expected[i], 1e-15);
  const double printed[] = {0.52, 0.26, 0.13, 0.06, 0.03};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(pi[i], printed[i], 0.005);
}

TEST(ClassProportions, Balanced) {
  for (double v : class_proportions(3, 0.0)) EXPECT_EQ(v, 1.0 / 3.0);
}

TEST(ClassProportions, HalfwayIsTheAverageOfTheEndpoints) {
  // (1/3 + 4/7) / 2 = 19/42, (1/3 + 2/7) / 2 = 13/42, (1/3 + 1/7) / 2 = 10/42
  const auto pi = class_proportions(3, 0.5);
  EXPECT_NEAR(pi[0], 19.0 / 42, 1e-15);
  EXPECT_NEAR(pi[1], 13.0 / 42, 1e-15);
  EXPECT_NEAR(pi[2], 10.0 / 42, 1e-15);
}

TEST(ClassProportions, DomainErrors) {
  EXPECT_THROW(class_proportions(1, 0.0), Error);
  EXPECT_THROW(class_proportions(3, -0.1), Error);
  EXPECT_THROW(class_proportions(3, 1.5), Error);
}

TEST(ClassProportions, SumToOneAndNonincreasing) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 20)(rng);
    const double p = u(rng);
    const auto pi = class_proportions(k, p);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      ASSERT_GT(pi[i], 0.0);
      if (i > 0) {
        ASSERT_LE(pi[i], pi[i - 1]);
      }
      s += pi[i];
    }
    ASSERT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(ControlledMatrix, NoErrorGivesPerfectClassification) {
  const auto pi = class_proportions(4, 0.3);
  const auto m = controlled_matrix(pi, {1, 1, 1, 1});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(m(i, j), i == j ? pi[i] : 0.0);
}

TEST(ControlledMatrix, TotalErrorSpreadsUniformly) {
  const auto m = controlled_matrix(class_proportions(3, 0.0), {0, 0, 0});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(m(i, j), i == j ? 0.0 : 1.0 / 6.0, 1e-15);
}

TEST(ControlledMatrix, ErrorInFirstClassOnly) {
  const auto m = controlled_matrix(class_proportions(3, 0.0), {0.7, 1, 1});
  EXPECT_NEAR(m(0, 0), 0.7 / 3, 1e-15);
  EXPECT_NEAR(m(1, 0), 0.15 / 3, 1e-15);
  EXPECT_NEAR(m(2, 0), 0.15 / 3, 1e-15);
  EXPECT_NEAR(m(1, 1), 1.0 / 3, 1e-15);
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(2, 1), 0.0);
}

TEST(ControlledMatrix, Errors) {
  const auto pi = class_proportions(3, 0.0);
  EXPECT_THROW(controlled_matrix(pi, {1, 1}), Error);
  EXPECT_THROW(controlled_matrix(pi, {1, 1.2, 1}), Error);
}

TEST(MakeSeries, Examples) {
  SeriesSpec spec;
  spec.k = 3;
  spec.grid = {1.0};
  for (DropMode mode : {DropMode::AllClasses, DropMode::FirstClassOnly}) {
    spec.mode = mode;
    const auto s = make_series(spec);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_DOUBLE_EQ(s[0].trace(), 1.0);
  }
  spec.grid = {0.4};
  spec.mode = DropMode::FirstClassOnly;
  EXPECT_NEAR(make_series(spec)[0].trace(), 0.8, 1e-12);
  spec.mode = DropMode::AllClasses;
  EXPECT_NEAR(make_series(spec)[0].trace(), 0.4, 1e-12);
}

TEST(MakeSeries, RejectsBadGrid) {
  SeriesSpec spec;
  spec.grid = {0.2, 0.2};
  EXPECT_THROW(make_series(spec), Error);
  spec.grid = {0.1, 0.5};
  spec.c_lo = 0.2;
  EXPECT_THROW(make_series(spec), Error);
}

TEST(MakeGrid, DefaultHas101Points) {
  const auto g = make_grid();
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[37], 0.37, 1e-15);
  const auto h = make_grid(0.3, 0.2);
  EXPECT_EQ(h, (std::vector<double>{0.2, 0.5, 0.8, 1.0}));
}

class SeriesProperties : public ::testing::TestWithParam<std::tuple<std::size_t, double>> {};

TEST_P(SeriesProperties, MarginalsClosedFormsAndMonotonicity) {
  const auto [k, p] = GetParam();
  const auto pi = class_proportions(k, p);
  SeriesSpec spec;
  spec.k = k;
  spec.p = p;
  for (DropMode mode : {DropMode::AllClasses, DropMode::FirstClassOnly}) {
    spec.mode = mode;
    const auto series = make_series(spec);
    std::vector<std::optional<double>> prev;
    for (std::size_t n = 0; n < series.size(); ++n) {
      const auto& m = series[n];
      const double c = spec.grid[n];
      const auto mg = marginals(m);
      for (std::size_t j = 0; j < k; ++j) ASSERT_NEAR(mg.cols[j], pi[j], 1e-15);

      const double osr = *overall_measure(m, MeasureKind::OSR).value;
      const double expected = mode == DropMode::AllClasses ? c : 1.0 - pi[0] * (1.0 - c);
      ASSERT_NEAR(osr, expected, 1e-12);

      // Every measure except the GT index, on every class.
      std::vector<std::optional<double>> values;
      for (MeasureKind kind : kMulticlassKinds) values.push_back(evaluate({kind, std::nullopt}, m));
      for (MeasureKind kind : kClassSpecificKinds) {
        if (kind == MeasureKind::GT_INDEX) continue;
        for (std::size_t i = 0; i < k; ++i) {
          auto v = evaluate({kind, i}, m);
          // FPR is an error rate: flip it so that larger is better.
          if (v && kind == MeasureKind::FPR) v = -*v;
          values.push_back(v);
        }
      }
      if (!prev.empty()) {
        for (std::size_t v = 0; v < values.size(); ++v)
          if (values[v] && prev[v]) {
            ASSERT_GE(*values[v], *prev[v] - 1e-12) << "measure slot " << v << " c=" << c;
          }
      }
      prev = std::move(values);
    }
  }
  const auto x = series_matrix(pi, 1.0, DropMode::AllClasses);
  const auto y = series_matrix(pi, 1.0, DropMode::FirstClassOnly);
  EXPECT_EQ(x, y);
}

INSTANTIATE_TEST_SUITE_P(Grid, SeriesProperties,
                         ::testing::Combine(::testing::Values(2, 3, 5, 8), ::testing::Values(0.0, 0.5, 1.0)));

}  // namespace
}  // namespace cmeval
