#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "sgdlab/core/error.hpp"
#include "sgdlab/fokker_planck/distance.hpp"
#include "sgdlab/fokker_planck/grid.hpp"
#include "sgdlab/fokker_planck/solver.hpp"
#include "sgdlab/landscape/families.hpp"

using namespace sgdlab;

TEST(Grid, Geometry) {
  const auto g = GridSpec::plane(-1, 1, 4, 0, 3, 3);
  EXPECT_DOUBLE_EQ(g.spacing(0), 0.5);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.5);
  EXPECT_EQ(g.size(), 12u);
  EXPECT_DOUBLE_EQ(g.point(g.index(1, 2))[0], -0.25);
  EXPECT_DOUBLE_EQ(g.point(g.index(1, 2))[1], 2.5);
  EXPECT_EQ(GridSpec::from_json(g.to_json()), g);
}

TEST(Grid, Validation) {
  EXPECT_THROW(GridSpec::line(0, 1, 2).validate(), std::invalid_argument);
  EXPECT_THROW(GridSpec::line(1, 0, 10).validate(), std::invalid_argument);
  EXPECT_THROW(GridSpec::plane(0, 1, 600, 0, 1, 600).validate(), std::invalid_argument);
  EXPECT_NO_THROW(GridSpec::plane(0, 1, 512, 0, 1, 512).validate());
}

TEST(Grid, CoveringContainsCriticalPoints) {
  const auto [land, cat] = make_double_well(0.25);
  const auto g = GridSpec::covering(cat, 4.0, 200);
  EXPECT_LT(g.lo[0], -1.0);
  EXPECT_GT(g.hi[0], 1.0);
  EXPECT_EQ(g.cells[0], 200);
}

TEST(Density, GaussianMoments) {
  const auto g = GridSpec::line(-5, 5, 1000);
  const auto p = DensityField::gaussian(g, Vec::Constant(1, 0.5), 30.0);
  EXPECT_NEAR(p.mass(), 1.0, 1e-14);
  EXPECT_NEAR(p.mean(0), 0.5, 1e-10);
  EXPECT_NEAR(p.variance(0), 0.09 + g.spacing(0) * g.spacing(0) / 12.0, 1e-4);
}

TEST(Stationary, MatchesGibbsAndPassesTailCheck) {
  const auto [land, cat] = make_quadratic({2.0});
  const auto g = GridSpec::covering(cat, 3.0, 800);
  const auto s = stationary_density(land, 3.0, g);
  EXPECT_NEAR(s.density.mass(), 1.0, 1e-12);
  // Gibbs e^{-eta lambda x^2 / 2} has variance 1 / (eta lambda).
  EXPECT_NEAR(s.density.variance(0), 1.0 / 6.0, 1e-4);
  EXPECT_NEAR(s.kappa, std::sqrt(6.0 / (2 * M_PI)), 1e-4);
  EXPECT_NEAR(std::log(s.kappa), s.log_kappa, 1e-12);
  EXPECT_LT(s.tail_fraction, 1e-6);
}

TEST(Stationary, TooSmallGridThrows) {
  const auto [land, cat] = make_quadratic({1.0});
  EXPECT_THROW(stationary_density(land, 1.0, GridSpec::line(-1, 1, 100)), std::domain_error);
}

TEST(Stationary, NeedsConstantNoise) {
  const auto [land, cat] = make_quadratic({1.0}, NoiseModel{1.0, 1.0, {}});
  EXPECT_THROW(stationary_density(land, 1.0, GridSpec::line(-8, 8, 100)), std::exception);
}

TEST(Evolve, GibbsStaysPut) {
  const auto [land, cat] = make_double_well(0.25);
  const auto sched = Schedule::constant(0.25, 1.0);  // eta = 8
  const auto g = GridSpec::covering(cat, 8.0, 400);
  const auto pinf = stationary_density(land, 8.0, g).density;
  const auto r = evolve(land, sched, pinf, 2.0, 0.5 * explicit_dt_bound(land, sched, g));
  EXPECT_LT(weighted_l2_distance(r.final_field, pinf).value, 1e-20);
  EXPECT_LT(r.mass_drift, 1e-12);
}

TEST(Evolve, OrnsteinUhlenbeckMoments) {
  // Quadratic lambda = 1 at eta = 4: mean decays as e^{-t}, variance relaxes to 1/4.
  const auto [land, cat] = make_quadratic({1.0});
  const auto sched = Schedule::constant(0.5, 1.0);
  const auto g = GridSpec::covering(cat, 4.0, 600, 8.0);
  const auto p0 = DensityField::gaussian(g, Vec::Constant(1, 1.0), 0.2 / g.spacing(0));
  const double m0 = p0.mean(0), v0 = p0.variance(0);
  const double bound = explicit_dt_bound(land, sched, g);
  const auto n = static_cast<std::size_t>(std::ceil(1.0 / (0.9 * bound)));
  const auto r = evolve(land, sched, p0, 1.0, 1.0 / n);
  EXPECT_NEAR(r.final_time, 1.0, 1e-12);
  EXPECT_NEAR(r.final_field.mean(0), m0 * std::exp(-1.0), 2e-3);
  EXPECT_NEAR(r.final_field.variance(0), v0 * std::exp(-2.0) + 0.25 * (1 - std::exp(-2.0)), 2e-3);
}

TEST(Evolve, ImplicitAgreesWithExplicit) {
  const auto [land, cat] = make_double_well(0.25);
  const auto sched = Schedule::constant(0.5, 1.0);
  const auto g = GridSpec::covering(cat, 4.0, 200);
  const auto p0 = DensityField::gaussian(g, Vec::Constant(1, -1.0), 5.0);
  const double bound = explicit_dt_bound(land, sched, g);
  EvolveOptions ex, im;
  ex.scheme = TimeScheme::Explicit;
  im.scheme = TimeScheme::Implicit;
  const auto a = evolve(land, sched, p0, 1.0, 0.2 * bound, ex);
  const auto b = evolve(land, sched, p0, 1.0, 0.2 * bound, im);
  EXPECT_EQ(b.scheme_used, TimeScheme::Implicit);
  EXPECT_NEAR(a.final_field.mean(0), b.final_field.mean(0), 1e-3);
  EXPECT_NEAR(a.final_field.variance(0), b.final_field.variance(0), 1e-3);
}

TEST(Evolve, SerialAndParallelBitIdentical) {
  const auto [land, cat] = make_multiwell({{Vec::Constant(2, 0.0), 0.0, Vec::Constant(2, 2.0), {}},
                                           {Vec::Constant(2, 2.0), 0.0, Vec::Constant(2, 3.0), {}}});
  const auto sched = Schedule::constant(0.5, 1.0);
  const auto g = GridSpec::covering(cat, 4.0, 64);
  const auto p0 = DensityField::gaussian(g, Vec::Constant(2, 0.0), 3.0);
  const double dt = 0.5 * explicit_dt_bound(land, sched, g);
  EvolveOptions s, p;
  s.serial = true;
  p.workers = 3;
  const auto a = evolve(land, sched, p0, 0.2, dt, s);
  const auto b = evolve(land, sched, p0, 0.2, dt, p);
  EXPECT_EQ(a.final_field.values, b.final_field.values);
  EXPECT_LT(a.mass_drift, 1e-12);
}

TEST(Evolve, AutoRejectsStepAboveBound) {
  const auto [land, cat] = make_double_well(0.25);
  const auto sched = Schedule::constant(0.5, 1.0);
  const auto g = GridSpec::covering(cat, 4.0, 200);
  const auto p0 = DensityField::gaussian(g, Vec::Constant(1, -1.0));
  EXPECT_THROW(evolve(land, sched, p0, 1.0, 3.0 * explicit_dt_bound(land, sched, g)),
               std::invalid_argument);
}

TEST(Evolve, SnapshotsAndObserver) {
  const auto [land, cat] = make_double_well(0.25);
  const auto sched = Schedule::constant(0.5, 1.0);
  const auto g = GridSpec::covering(cat, 4.0, 100);
  const auto p0 = DensityField::gaussian(g, Vec::Constant(1, -1.0));
  EvolveOptions o;
  o.snapshot_every = 10;
  o.observe_every = 5;
  int calls = 0;
  o.observer = [&](double, const DensityField&) { ++calls; };
  const double dt = 0.5 * explicit_dt_bound(land, sched, g);
  const auto r = evolve(land, sched, p0, 40 * dt, dt, o);
  EXPECT_EQ(r.steps, 40u);
  EXPECT_EQ(r.snapshots.size(), r.snapshot_times.size());
  EXPECT_GE(r.snapshots.size(), 4u);
  EXPECT_EQ(calls, 9);
}

TEST(Distance, ZeroForIdenticalAndKnownValue) {
  const auto g = GridSpec::line(0, 1, 4);
  DensityField a{g, {1, 1, 1, 1}}, b{g, {2, 0, 1, 1}};
  EXPECT_DOUBLE_EQ(weighted_l2_distance(a, a).value, 0.0);
  EXPECT_DOUBLE_EQ(weighted_l2_distance(b, a).value, (1.0 + 1.0) * 0.25);
  DensityField c{GridSpec::line(0, 2, 4), {1, 1, 1, 1}};
  EXPECT_THROW(weighted_l2_distance(a, c), std::invalid_argument);
}

TEST(Distance, FitRecoversRate) {
  std::vector<double> t, d;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.1 * i);
    d.push_back(3.0 * std::exp(-1.7 * t.back()));
  }
  const auto f = fit_decay_rate(t, d, 1.0, 9.0);
  EXPECT_NEAR(f.rate, 1.7, 1e-10);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_THROW(fit_decay_rate(t, d, 1.0, 1.5), std::exception);
}

TEST(Distance, CsvHeader) {
  std::ostringstream out;
  const std::vector<double> t = {0.0}, d = {1.0};
  write_distance_csv(out, t, d);
  EXPECT_EQ(out.str().substr(0, 12), "t,distance\r\n");
}
