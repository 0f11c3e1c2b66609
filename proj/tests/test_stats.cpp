#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "superstar/stats.hpp"

using namespace superstar;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bisect_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Normal, InverseCdfMatchesBisection) {
  for (double p : {1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575, 0.999, 1 - 1e-6}) {
    EXPECT_NEAR(inverse_normal_cdf(p), bisect_quantile(p), 1e-9) << p;
  }
  EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
  EXPECT_THROW(inverse_normal_cdf(0.0), std::invalid_argument);
  EXPECT_THROW(inverse_normal_cdf(1.0), std::invalid_argument);
}

TEST(Normal, CriticalValues) {
  EXPECT_NEAR(normal_critical_value(0.995), 2.807033768, 1e-8);
  EXPECT_NEAR(normal_critical_value(0.95), 1.959963985, 1e-8);
  EXPECT_THROW(normal_critical_value(1.0), std::invalid_argument);
  EXPECT_THROW(normal_critical_value(0.0), std::invalid_argument);
}

TEST(AgrestiCoull, ReferenceIntervals) {
  struct Case {
    std::uint64_t x;
    double lower, upper;
  };
  // Endpoints from an independent evaluation with Python's statistics.NormalDist.
  for (const Case& c : {Case{620, 0.22455957273745694, 0.273023931230689},
                        Case{2179, 0.8516085661422393, 0.889256393879336},
                        Case{2180, 0.8520319924876492, 0.889630454035564},
                        Case{2345, 0.9229673469872393, 0.9502803723062214}}) {
    const auto ci = agresti_coull(c.x, 2500, 0.995);
    EXPECT_NEAR(ci.lower, c.lower, 1e-12) << c.x;
    EXPECT_NEAR(ci.upper, c.upper, 1e-12) << c.x;
  }
  const auto a = agresti_coull(620, 2500, 0.995);
  EXPECT_EQ(round_half_even(a.lower, 3), 0.225);
  EXPECT_EQ(round_half_even(a.upper, 3), 0.273);
  const auto b = agresti_coull(2345, 2500, 0.995);
  EXPECT_EQ(round_half_even(b.lower, 3), 0.923);
  EXPECT_EQ(round_half_even(b.upper, 3), 0.950);
  const auto c = agresti_coull(2179, 2500, 0.995);
  EXPECT_EQ(round_half_even(c.lower, 3), 0.852);
  EXPECT_EQ(round_half_even(c.upper, 3), 0.889);
}

TEST(AgrestiCoull, Formula) {
  const double z = normal_critical_value(0.995);
  for (std::uint64_t x : {0u, 1u, 17u, 50u, 99u, 100u}) {
    const double n = 100 + z * z;
    const double p = (x + z * z / 2) / n;
    const double half = z * std::sqrt(p * (1 - p) / n);
    const auto ci = agresti_coull(x, 100, 0.995);
    EXPECT_NEAR(ci.lower, std::max(0.0, p - half), 1e-15);
    EXPECT_NEAR(ci.upper, std::min(1.0, p + half), 1e-15);
    if (ci.lower > 0 && ci.upper < 1) {
      EXPECT_NEAR(0.5 * (ci.lower + ci.upper), p, 1e-15);
    }
    EXPECT_EQ(ci.method, IntervalMethod::AgrestiCoull);
    EXPECT_EQ(ci.confidence, 0.995);
  }
  EXPECT_EQ(agresti_coull(0, 10, 0.995).lower, 0.0);
  EXPECT_EQ(agresti_coull(10, 10, 0.995).upper, 1.0);
}

TEST(AgrestiCoull, SymmetricUnderComplement) {
  for (std::uint64_t x = 0; x <= 40; ++x) {
    const auto a = agresti_coull(x, 40, 0.99);
    const auto b = agresti_coull(40 - x, 40, 0.99);
    EXPECT_NEAR(a.lower, 1 - b.upper, 1e-14);
    EXPECT_NEAR(a.upper, 1 - b.lower, 1e-14);
  }
}

TEST(AgrestiCoull, WidthShrinksAsRootN) {
  const auto w = [](std::uint64_t n) {
    const auto ci = agresti_coull(n / 2, n, 0.995);
    return ci.upper - ci.lower;
  };
  for (std::uint64_t n : {400u, 2500u, 10000u}) {
    const double z2 = std::pow(normal_critical_value(0.995), 2);
    EXPECT_NEAR(w(n) / w(4 * n), 2 * std::sqrt((4 * n + z2) / (4 * n + 4 * z2)), 1e-12) << n;
  }
  EXPECT_GT(w(100), w(101));
}

TEST(AgrestiCoull, RejectsBadInput) {
  EXPECT_THROW(agresti_coull(0, 0, 0.995), std::invalid_argument);
  EXPECT_THROW(agresti_coull(11, 10, 0.995), std::invalid_argument);
  EXPECT_THROW(agresti_coull(1, 10, 1.5), std::invalid_argument);
}

TEST(AgrestiCoull, CoverageAtHighProportion) {
  std::mt19937_64 rng(2024);
  std::binomial_distribution<std::uint64_t> draw(2500, 0.95);
  int covered = 0;
  const int batches = 2000;
  for (int i = 0; i < batches; ++i) covered += agresti_coull(draw(rng), 2500, 0.995).contains(0.95);
  EXPECT_GE(covered, 0.99 * batches);
}

TEST(Wald, CentredOnSampleProportion) {
  const auto ci = wald_interval(30, 100, 0.95);
  const double half = 1.959963985 * std::sqrt(0.3 * 0.7 / 100);
  EXPECT_NEAR(ci.lower, 0.3 - half, 1e-8);
  EXPECT_NEAR(ci.upper, 0.3 + half, 1e-8);
  EXPECT_EQ(ci.method, IntervalMethod::Wald);
  const auto degenerate = wald_interval(0, 50, 0.95);
  EXPECT_EQ(degenerate.lower, 0.0);
  EXPECT_EQ(degenerate.upper, 0.0);
  EXPECT_EQ(binomial_interval(30, 100, 0.95, IntervalMethod::Wald).upper, ci.upper);
  EXPECT_EQ(binomial_interval(30, 100, 0.95, IntervalMethod::AgrestiCoull).upper, agresti_coull(30, 100, 0.95).upper);
}

TEST(Rounding, HalfEven) {
  EXPECT_EQ(round_half_even(0.0625, 3), 0.062);
  EXPECT_EQ(round_half_even(0.1875, 3), 0.188);
  EXPECT_EQ(round_half_even(0.5, 0), 0.0);
  EXPECT_EQ(round_half_even(1.5, 0), 2.0);
  EXPECT_EQ(round_half_even(0.9496, 3), 0.95);
  EXPECT_EQ(round_half_even(0.12345678, 3), 0.123);
  EXPECT_EQ(round_half_even(-0.0625, 3), -0.062);
}

TEST(Intervals, ContainsAndOverlaps) {
  ConfidenceInterval a{0.2, 0.4}, b{0.35, 0.5}, c{0.41, 0.6};
  EXPECT_TRUE(a.contains(0.2));
  EXPECT_TRUE(a.contains(0.4));
  EXPECT_FALSE(a.contains(0.41));
  EXPECT_TRUE(a.overlaps(b));
  EXPECT_FALSE(a.overlaps(c));
  EXPECT_EQ(to_string(IntervalMethod::AgrestiCoull), "agresti-coull");
}
