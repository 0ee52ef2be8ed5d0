#include <gtest/gtest.h>

#include <vector>

#include "hercules/core.hpp"

using namespace hercules;

namespace {

ErrorKind kind_of(const Requirement& r) {
  try {
    validate_requirement(r);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST(Requirement, AcceptsOrdinaryBand) {
  EXPECT_NO_THROW(validate_requirement({20 * kMbps, 30 * kMbps, false}));
}

TEST(Requirement, RejectsEqualBounds) {
  EXPECT_EQ(kind_of({10 * kKbps, 10 * kKbps, false}), ErrorKind::DegenerateRequirement);
}

TEST(Requirement, RejectsInvertedBounds) {
  EXPECT_EQ(kind_of({10 * kKbps, 5 * kKbps, true}), ErrorKind::DegenerateRequirement);
}

TEST(Requirement, RejectsZeroMinimum) {
  EXPECT_EQ(kind_of({0.0, 5 * kMbps, false}), ErrorKind::NonPositiveMin);
}

TEST(Coefficients, DefaultsAreValid) {
  const CoefficientSet c;
  EXPECT_DOUBLE_EQ(c.t, 0.9);
  EXPECT_DOUBLE_EQ(c.beta, 11.35);
  EXPECT_DOUBLE_EQ(c.gamma, 25.0);
  EXPECT_DOUBLE_EQ(c.phi, 750.0);
  EXPECT_DOUBLE_EQ(c.d_scale, 2.0);
  EXPECT_NO_THROW(validate_coefficients(c));
}

TEST(Coefficients, RejectsOutOfRange) {
  CoefficientSet c;
  c.t = 1.5;
  EXPECT_THROW(validate_coefficients(c), Error);
  c = {};
  c.d_scale = 0.5;
  EXPECT_THROW(validate_coefficients(c), Error);
  c = {};
  c.gamma = 0.0;
  EXPECT_THROW(validate_coefficients(c), Error);
}

TEST(Slope, ConstantSamplesHaveZeroGradientAndSpread) {
  std::vector<RttSample> s{{0.000, 0.02}, {0.001, 0.02}, {0.002, 0.02}, {0.003, 0.02}};
  EXPECT_DOUBLE_EQ(least_squares_slope(s), 0.0);
  EXPECT_DOUBLE_EQ(population_stddev(s), 0.0);
}

TEST(Slope, ExactLinearFit) {
  std::vector<RttSample> s{{0.000, 0.020}, {0.001, 0.021}, {0.002, 0.022}, {0.003, 0.023}};
  EXPECT_NEAR(least_squares_slope(s), 1.0, 1e-12);
  EXPECT_NEAR(slope_standard_error(s), 0.0, 1e-9);
}

TEST(Slope, DegenerateInputs) {
  std::vector<RttSample> one{{0.0, 0.02}};
  EXPECT_DOUBLE_EQ(least_squares_slope(one), 0.0);
  std::vector<RttSample> same_time{{1.0, 0.02}, {1.0, 0.03}};
  EXPECT_DOUBLE_EQ(least_squares_slope(same_time), 0.0);
  EXPECT_DOUBLE_EQ(slope_standard_error(same_time), 0.0);
}

TEST(Slope, StandardErrorMatchesHandComputation) {
  // Residuals +-0.001 around a zero slope line over t = 0..3.
  std::vector<RttSample> s{{0, 0.021}, {1, 0.019}, {2, 0.019}, {3, 0.021}};
  EXPECT_NEAR(least_squares_slope(s), 0.0, 1e-15);
  const double rss = 4 * 1e-6;
  const double sxx = 5.0;
  EXPECT_NEAR(slope_standard_error(s), std::sqrt(rss / 2.0 / sxx), 1e-15);
}

TEST(Stddev, PopulationDefinition) {
  std::vector<RttSample> s{{0, 1.0}, {1, 3.0}};
  EXPECT_DOUBLE_EQ(population_stddev(s), 1.0);
}

TEST(IntervalStats, BuiltFromSamples) {
  auto s = make_interval_stats(5e6, 0.01, {{0, 0.02}, {0.001, 0.021}, {0.002, 0.022}}, 0.02);
  EXPECT_NEAR(s.rtt_gradient, 1.0, 1e-12);
  EXPECT_NEAR(s.mean_rtt(), 0.021, 1e-15);
  EXPECT_GT(s.rtt_stddev, 0.0);
  EXPECT_NO_THROW(validate_stats(s));
  s.loss_ratio = 1.5;
  EXPECT_THROW(validate_stats(s), Error);
}

TEST(Error, MessageCarriesKind) {
  const Error e(ErrorKind::GridTooLarge, "too many");
  EXPECT_EQ(e.kind(), ErrorKind::GridTooLarge);
  EXPECT_NE(std::string(e.what()).find("GridTooLarge"), std::string::npos);
}
