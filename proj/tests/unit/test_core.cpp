#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "sgdlab/core/csv.hpp"
#include "sgdlab/core/hash.hpp"
#include "sgdlab/core/rng.hpp"
#include "sgdlab/core/stats.hpp"

using namespace sgdlab;

TEST(RandomStream, SameKeySameSequence) {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
  }
}

TEST(RandomStream, StreamsDiffer) {
  RandomStream a(42, 0), b(42, 1), c(43, 0);
  EXPECT_NE(a.next_u64(), b.next_u64());
  EXPECT_NE(RandomStream(42, 0).next_u64(), c.next_u64());
}

TEST(RandomStream, UniformAndNormalMoments) {
  RandomStream r(1, 2);
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    su2 += u * u;
  }
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(su2 / n - 0.25, 1.0 / 12.0, 0.002);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.01);
  EXPECT_NEAR(sn4 / n, 3.0, 0.06);
}

TEST(RandomStream, BelowStaysInRangeAndCoversIt) {
  RandomStream r(5, 5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Csv, FormatRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1e-17}) {
    EXPECT_EQ(std::stod(csv::format_double(x)), x);
  }
}

TEST(Csv, EscapesSpecialFields) {
  EXPECT_EQ(csv::escape_field("plain"), "plain");
  EXPECT_EQ(csv::escape_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv::escape_field("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, WriterUsesCrlfAndHeader) {
  std::ostringstream out;
  csv::Writer w(out, {"x", "label"});
  w.field(1.5).field("a,b");
  w.end_row();
  EXPECT_EQ(out.str(), "x,label\r\n1.5,\"a,b\"\r\n");
}

TEST(Hash, KnownSha256Vectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Stats, MeanVariance) {
  const std::vector<double> x = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(stats::mean(x), 2.5);
  EXPECT_DOUBLE_EQ(stats::variance(x), 5.0 / 3.0);
}

TEST(Stats, FitLineRecoversExactLine) {
  std::vector<double> x, y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(i);
    y.push_back(3.0 - 0.5 * i);
  }
  const auto f = stats::fit_line(x, y);
  EXPECT_NEAR(f.slope, -0.5, 1e-12);
  EXPECT_NEAR(f.intercept, 3.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
}

TEST(Stats, NormalCdfValues) {
  EXPECT_NEAR(stats::normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(stats::normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(stats::normal_cdf(-1.0), 0.15865525393145707, 1e-12);
}

TEST(Stats, KolmogorovSurvivalKnownPoints) {
  EXPECT_NEAR(stats::kolmogorov_survival(1.3581), 0.05, 1e-3);
  EXPECT_NEAR(stats::kolmogorov_survival(1.6276), 0.01, 1e-3);
}

TEST(Stats, KsSameDistributionVersusShifted) {
  RandomStream r(9, 9);
  std::vector<double> a, b, c;
  for (int i = 0; i < 2000; ++i) {
    a.push_back(r.normal());
    b.push_back(r.normal());
    c.push_back(r.normal() + 0.5);
  }
  EXPECT_GT(stats::ks_two_sample(a, b).p_value, 0.01);
  EXPECT_LT(stats::ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_DOUBLE_EQ(stats::ks_two_sample(a, a).statistic, 0.0);
}

TEST(Stats, ExponentialFitTestAcceptsExponentialRejectsUniform) {
  RandomStream r(3, 1);
  std::vector<double> e, u;
  for (int i = 0; i < 2000; ++i) {
    e.push_back(-2.0 * std::log(r.uniform_open()));
    u.push_back(r.uniform());
  }
  const auto fe = stats::exponential_fit_test(e);
  EXPECT_NEAR(fe.rate, 0.5, 0.05);
  EXPECT_FALSE(fe.rejected_at_1pct);
  EXPECT_TRUE(stats::exponential_fit_test(u).rejected_at_1pct);
}

TEST(Stats, MannWhitneyDirection) {
  const std::vector<double> hi = {10, 11, 12, 13, 14, 15, 16, 17};
  const std::vector<double> lo = {1, 2, 3, 4, 5, 6, 7, 8};
  // Exact permutation p-value of the most extreme arrangement is 1 / C(16, 8).
  EXPECT_NEAR(stats::mann_whitney_greater_p(hi, lo), 1.0 / 12870.0, 1e-9);
  EXPECT_GT(stats::mann_whitney_greater_p(lo, hi), 0.99);
}

TEST(Stats, BootstrapIntervalCoversMean) {
  RandomStream r(4, 4);
  std::vector<double> x;
  for (int i = 0; i < 500; ++i) x.push_back(1.0 + r.normal());
  const auto ci = stats::bootstrap_mean_ci(x, 2000, 0.95, 11);
  EXPECT_LT(ci.lo, stats::mean(x));
  EXPECT_GT(ci.hi, stats::mean(x));
  EXPECT_NEAR(ci.hi - ci.lo, 2 * 1.96 / std::sqrt(500.0), 0.03);
  const auto again = stats::bootstrap_mean_ci(x, 2000, 0.95, 11);
  EXPECT_EQ(ci.lo, again.lo);
  EXPECT_EQ(ci.hi, again.hi);
}
