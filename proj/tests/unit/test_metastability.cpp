#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sgdlab/core/rng.hpp"
#include "sgdlab/landscape/families.hpp"
#include "sgdlab/metastability/escape.hpp"
#include "sgdlab/metastability/kramers.hpp"

using namespace sgdlab;

TEST(Kramers, DoubleWellClosedForm) {
  // L = c (w^2 - 1)^2 / 4: L''(+-1) = 2c, L''(0) = -c.
  const double h = 0.25, c = 4 * h;
  const auto [land, cat] = make_double_well(h);
  const double gamma = 0.1, m = 1.0, beta = 1.0;
  const double eta = 2 * m / (gamma * beta);
  const auto k = kramers_time(cat, 0, 1, gamma, m, beta);
  const double expected = 2 * M_PI / c * std::sqrt(c / (2 * c)) * std::exp(eta * h);
  EXPECT_NEAR(k.time / expected, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(k.eta, eta);
  EXPECT_DOUBLE_EQ(k.exponent, eta * h);
  EXPECT_NEAR(k.time, 659.4, 0.05);
}

TEST(Kramers, DependsOnlyOnRatio) {
  const auto [land, cat] = make_double_well(0.25);
  const auto a = kramers_time(cat, 0, 1, 0.1, 1.0, 1.0);
  // Power-of-two scaling is exact in floating point.
  for (double c : {2.0, 4.0, 0.5, 1024.0}) {
    const auto b = kramers_time(cat, 0, 1, c * 0.1, c * 1.0, 1.0);
    EXPECT_EQ(a.time, b.time);
  }
  RandomStream r(1, 1);
  for (int i = 0; i < 50; ++i) {
    const double c = 0.1 + 10 * r.uniform();
    const auto b = kramers_time(cat, 0, 1, c * 0.1, c * 1.0, 1.0);
    EXPECT_NEAR(b.time / a.time, 1.0, 1e-12);
  }
}

TEST(Kramers, AsymmetricWellsUseTheirOwnBarriers) {
  WellSpec a{Vec::Constant(1, -1.0), 0.0, Vec::Constant(1, 4.0), {}};
  WellSpec b{Vec::Constant(1, 1.0), 0.2, Vec::Constant(1, 4.0), {}};
  const auto [land, cat] = make_multiwell({a, b});
  const auto ab = kramers_time(cat, 0, 1, 0.1, 1.0, 1.0);
  const auto ba = kramers_time(cat, 1, 0, 0.1, 1.0, 1.0);
  EXPECT_NEAR(ab.barrier - ba.barrier, 0.2, 1e-9);
  EXPECT_GT(ab.time, ba.time);
}

TEST(Kramers, Errors) {
  const auto [land, cat] = make_double_well(0.25);
  EXPECT_THROW(kramers_time(cat, 0, 0, 0.1, 1.0, 1.0), std::out_of_range);
  EXPECT_THROW(kramers_time(cat, 0, 1, 0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(kramers_time(cat, 0, 1, 0.1, -1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(kramers_time(cat, 0, 1, 0.1, 1.0, 0.0), std::invalid_argument);
}

TEST(Escape, SerialAndParallelIdentical) {
  const auto [land, cat] = make_double_well(0.25);
  EscapeSpec s;
  s.trajectories = 60;
  s.serial = true;
  EscapeSpec p = s;
  p.serial = false;
  p.workers = 3;
  const auto sched = Schedule::constant(0.25, 1.0);
  const auto a = mc_escape_time(land, cat, s, sched, 0.05, 5);
  const auto b = mc_escape_time(land, cat, p, sched, 0.05, 5);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.mc_mean, b.mc_mean);
}

TEST(Escape, ModerateBarrierAgreesWithKramers) {
  const auto [land, cat] = make_double_well(0.25);
  EscapeSpec s;
  s.trajectories = 400;
  const auto r = mc_escape_time(land, cat, s, Schedule::constant(0.125, 1.0), 0.05, 6);  // eta = 16
  ASSERT_TRUE(r.has_estimate);
  EXPECT_GT(r.ratio, 0.8);
  EXPECT_LT(r.ratio, 1.5);
  EXPECT_LT(r.ci.lo, r.mc_mean);
  EXPECT_GT(r.ci.hi, r.mc_mean);
  EXPECT_DOUBLE_EQ(r.radius, 0.1);
  EXPECT_NEAR(r.t_max, 10 * r.kramers.time, 1e-9);
}

TEST(Escape, HeavyCensoringGivesLowerBound) {
  const auto [land, cat] = make_double_well(0.25);
  EscapeSpec s;
  s.trajectories = 100;
  s.t_max = 50.0;  // well below the mean escape time at eta = 16
  const auto r = mc_escape_time(land, cat, s, Schedule::constant(0.125, 1.0), 0.05, 7);
  EXPECT_TRUE(r.has_estimate);
  EXPECT_TRUE(r.lower_bound);
  EXPECT_GT(r.censored, 5u);
  EXPECT_LT(r.mc_mean, 50.0);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Escape, FullCensoringGivesNoEstimate) {
  const auto [land, cat] = make_double_well(0.25);
  EscapeSpec s;
  s.trajectories = 20;
  s.t_max = 5.0;
  const auto r = mc_escape_time(land, cat, s, Schedule::constant(0.05, 1.0), 0.05, 7);
  EXPECT_FALSE(r.has_estimate);
  EXPECT_EQ(r.censored, 20u);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Escape, RequiresConstantSchedule) {
  const auto [land, cat] = make_double_well(0.25);
  EXPECT_THROW(mc_escape_time(land, cat, {}, Schedule::exp_decay(0.2, 1, 0.1, 1, 5), 0.05, 1),
               std::exception);
}

TEST(Escape, SweepSlopeNearBarrier) {
  const auto [land, cat] = make_double_well(0.25);
  EscapeSpec s;
  s.trajectories = 300;
  const auto t = escape_sweep(land, cat, s, {8, 12, 16}, 0.05, 9);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_DOUBLE_EQ(t.barrier, 0.25);
  EXPECT_NEAR(t.slope, 0.25, 0.06);
  EXPECT_NEAR(t.rows[0].gamma, 0.25, 1e-15);
  std::ostringstream out;
  t.write_csv(out);
  EXPECT_EQ(out.str().substr(0, 5), "eta,g");
}
