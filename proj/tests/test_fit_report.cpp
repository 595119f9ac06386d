#include <gtest/gtest.h>

#include <cmath>

#include "fracdim/errors.hpp"
#include "fracdim/fit.hpp"
#include "fracdim/report.hpp"

using namespace fracdim;

TEST(Fit, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{1, 3, 5, 7, 9};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.stderr_slope, 0.0, 1e-12);
  EXPECT_EQ(f.points, 5u);
  EXPECT_EQ(f.window_min, 0.0);
  EXPECT_EQ(f.window_max, 4.0);
}

TEST(Fit, NoisyLineStandardError) {
  // Residuals +-0.1 alternate; closed-form slope error for x = 0..3.
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{0.1, 0.9, 2.1, 2.9};
  const auto f = linear_fit(x, y);
  double sxx = 5.0, ssr = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ssr += r * r;
  }
  EXPECT_NEAR(f.stderr_slope, std::sqrt(ssr / 2.0 / sxx), 1e-12);
}

TEST(Fit, PowerLaw) {
  std::vector<double> x, y;
  for (double t = 1; t <= 1000; t *= 2) {
    x.push_back(t);
    y.push_back(3.0 * std::pow(t, 1.465));
  }
  const auto f = log_log_fit(x, y);
  EXPECT_NEAR(f.slope, 1.465, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-10);
  EXPECT_EQ(f.window_min, 1.0);
  EXPECT_EQ(f.window_max, 512.0);
}

TEST(Fit, Errors) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(linear_fit(one, one), InvalidArgument);
  const std::vector<double> a{1, 2}, b{1, 2, 3};
  EXPECT_THROW(linear_fit(a, b), InvalidArgument);
  const std::vector<double> neg{-1, 2, 3};
  EXPECT_THROW(log_log_fit(neg, b), InvalidArgument);
}

TEST(Fit, SpearmanWithTies) {
  const std::vector<double> x{1, 2, 2, 3};
  const std::vector<double> y{10, 20, 30, 40};
  // Average ranks 1, 2.5, 2.5, 4 against 1..4: 4.5 / sqrt(4.5 * 5).
  EXPECT_NEAR(spearman(x, y), 4.5 / std::sqrt(22.5), 1e-12);
  const std::vector<double> rev{4, 3, 2, 1};
  EXPECT_NEAR(spearman(y, rev), -1.0, 1e-12);
}

TEST(Fit, SeriesRatios) {
  const auto s = make_series({0, 1, 2}, {1.0, 2.0, 8.0});
  ASSERT_EQ(s.ratios.size(), 2u);
  EXPECT_DOUBLE_EQ(s.ratios[0], 2.0);
  EXPECT_DOUBLE_EQ(s.ratios[1], 4.0);
  EXPECT_NEAR(geometric_mean_ratio(s), std::sqrt(8.0), 1e-14);
  EXPECT_NEAR(geometric_mean_ratio(s, 1), 4.0, 1e-14);
  EXPECT_THROW(geometric_mean_ratio(s, 2), InvalidArgument);
}

TEST(Report, AssertionsAndMargins) {
  ExperimentReport r;
  r.id = "demo";
  EXPECT_TRUE(r.expect_le("a <= b", 1.0, 2.0).passed);
  EXPECT_DOUBLE_EQ(r.assertions.back().margin, 1.0);
  EXPECT_FALSE(r.expect_lt("strict", 2.0, 2.0).passed);
  EXPECT_TRUE(r.expect_in("band", 0.5, 0.0, 1.0).passed);
  EXPECT_DOUBLE_EQ(r.assertions.back().margin, 0.5);
  EXPECT_FALSE(r.expect_ge("nan never passes", std::nan(""), 0.0).passed);
  EXPECT_EQ(r.failures(), 2u);
  EXPECT_FALSE(r.passed());

  ExperimentReport soft;
  soft.expect_gt("soft check", 0.0, 1.0, false);
  soft.expect_true("hard check", true);
  EXPECT_TRUE(soft.passed());
  EXPECT_EQ(soft.failures(), 0u);
}

TEST(Report, JsonAndMarkdown) {
  ExperimentReport r;
  r.id = "demo";
  r.parameters["n"] = 3;
  r.measurements["values"] = {1.0, 2.0};
  r.expect_le("x <= 1", 0.5, 1.0);
  r.notes.push_back("a note");
  r.runtime_seconds = 1.25;
  const auto j = to_json(r);
  EXPECT_EQ(j["experiment"], "demo");
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["assertions"][0]["relation"], "<=");
  EXPECT_EQ(j["runtime_seconds"], 1.25);
  EXPECT_FALSE(to_json(r, false).contains("runtime_seconds"));
  // Serialization is stable.
  EXPECT_EQ(nlohmann::ordered_json::parse(j.dump()).dump(), j.dump());

  const auto md = to_markdown(r);
  EXPECT_EQ(md.rfind("# demo: PASS", 0), 0u);
  EXPECT_NE(md.find("| x <= 1 | <= |"), std::string::npos);
  EXPECT_NE(md.find("- a note"), std::string::npos);
}
