#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "sgdlab/fokker_planck/solver.hpp"
#include "sgdlab/kernels/ensemble.hpp"
#include "sgdlab/kernels/fp_flux.hpp"
#include "sgdlab/landscape/families.hpp"

using namespace sgdlab;

namespace {

kernels::FaceCoefficients ou_coefficients(const GridSpec& grid, double diffusion) {
  std::vector<double> loss(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) loss[i] = 0.5 * grid.point(i).squaredNorm();
  return kernels::build_face_coefficients(grid, loss, std::vector<double>(grid.size(), diffusion));
}

double total(const std::vector<double>& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

}  // namespace

TEST(Kernels, BernoulliFunction) {
  EXPECT_DOUBLE_EQ(kernels::bernoulli(0.0), 1.0);
  EXPECT_NEAR(kernels::bernoulli(1e-10), 1.0 - 0.5e-10, 1e-16);
  EXPECT_NEAR(kernels::bernoulli(2.0), 2.0 / (std::exp(2.0) - 1.0), 1e-15);
  // B(-x) = B(x) + x
  for (double x : {0.3, 5.0, 40.0}) EXPECT_NEAR(kernels::bernoulli(-x), kernels::bernoulli(x) + x, 1e-12 * (1 + x));
  EXPECT_TRUE(std::isfinite(kernels::bernoulli(800.0)));
}

TEST(Kernels, FirstPassageSerialEqualsParallel) {
  const auto [land, cat] = make_double_well(0.25);
  kernels::FirstPassageProblem p;
  p.landscape = &land;
  p.start = Vec::Constant(1, -1.0);
  p.target = Vec::Constant(1, 1.0);
  p.radius = 0.1;
  p.ratio = 0.25;
  p.dt = 0.05;
  p.t_max = 500.0;
  p.seed = 12;
  const auto s = kernels::first_passage_serial(p, 64);
  for (int workers : {1, 2, 3, 8}) {
    const auto q = kernels::first_passage_parallel(p, 64, workers);
    EXPECT_EQ(s.times, q.times) << workers;
    EXPECT_EQ(s.censored, q.censored) << workers;
  }
}

TEST(Kernels, FirstPassageStreamsAreIndexed) {
  const auto [land, cat] = make_double_well(0.25);
  kernels::FirstPassageProblem p;
  p.landscape = &land;
  p.start = Vec::Constant(1, -1.0);
  p.target = Vec::Constant(1, 1.0);
  p.radius = 0.1;
  p.ratio = 0.25;
  p.dt = 0.05;
  p.t_max = 500.0;
  p.seed = 12;
  const auto all = kernels::first_passage_serial(p, 10);
  p.first_stream = 4;
  const auto tail = kernels::first_passage_serial(p, 6);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(tail.times[i], all.times[i + 4]);
}

TEST(Kernels, FirstPassageCensorsAtCap) {
  const auto [land, cat] = make_double_well(0.25);
  kernels::FirstPassageProblem p;
  p.landscape = &land;
  p.start = Vec::Constant(1, -1.0);
  p.target = Vec::Constant(1, 1.0);
  p.radius = 0.05;
  p.ratio = 0.01;  // eta = 200: escape essentially impossible
  p.dt = 0.05;
  p.t_max = 10.0;
  const auto s = kernels::first_passage_serial(p, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(s.censored[i], 1);
    EXPECT_DOUBLE_EQ(s.times[i], 10.0);
  }
}

TEST(Kernels, OccupationSerialEqualsParallel) {
  const auto [land, cat] = make_double_well(0.25);
  kernels::OccupationProblem p;
  p.landscape = &land;
  p.start = cat.minima[0].location;
  p.centers = {cat.minima[0].location, cat.minima[1].location};
  p.radius = 0.5;
  p.ratio = 0.25;
  p.dt = 0.02;
  p.t_burn = 10.0;
  p.t_total = 400.0;
  p.seed = 3;
  const auto s = kernels::occupation_serial(p, 5);
  for (int workers : {1, 2, 4}) {
    const auto q = kernels::occupation_parallel(p, 5, workers);
    EXPECT_EQ(s.occupancy, q.occupancy);
    EXPECT_EQ(s.switches, q.switches);
  }
  for (const auto& row : s.occupancy) {
    EXPECT_LE(row[0] + row[1], 390.0 + 1e-9);
    EXPECT_GT(row[0] + row[1], 0.0);
  }
}

TEST(Kernels, ExplicitStepSerialEqualsParallel1D) {
  const auto grid = GridSpec::line(-4, 4, 301);
  const auto c = ou_coefficients(grid, 0.5);
  const auto p0 = DensityField::gaussian(grid, Vec::Constant(1, 1.0));
  std::vector<double> a, b;
  kernels::explicit_step_serial(c, p0.values, a, 0.5 * c.explicit_bound());
  for (int workers : {1, 2, 5}) {
    kernels::explicit_step_parallel(c, p0.values, b, 0.5 * c.explicit_bound(), workers);
    EXPECT_EQ(a, b);
  }
}

TEST(Kernels, ExplicitStepSerialEqualsParallel2D) {
  const auto grid = GridSpec::plane(-3, 3, 60, -3, 3, 45);
  const auto c = ou_coefficients(grid, 0.3);
  Vec m(2);
  m << 0.5, -0.5;
  const auto p0 = DensityField::gaussian(grid, m, 3.0);
  std::vector<double> a, b;
  kernels::explicit_step_serial(c, p0.values, a, c.explicit_bound());
  kernels::explicit_step_parallel(c, p0.values, b, c.explicit_bound(), 3);
  EXPECT_EQ(a, b);
}

TEST(Kernels, StepsConserveMassAndPositivity) {
  const auto grid = GridSpec::plane(-3, 3, 40, -3, 3, 40);
  const auto c = ou_coefficients(grid, 0.3);
  auto p = DensityField::gaussian(grid, Vec::Zero(2), 2.0).values;
  const double m0 = total(p);
  std::vector<double> next;
  for (int k = 0; k < 50; ++k) {
    kernels::explicit_step_serial(c, p, next, c.explicit_bound());
    p.swap(next);
  }
  EXPECT_NEAR(total(p), m0, 1e-12 * m0);
  EXPECT_GE(*std::min_element(p.begin(), p.end()), 0.0);
  for (int k = 0; k < 20; ++k) kernels::implicit_step(c, p, 0.5);
  EXPECT_NEAR(total(p), m0, 1e-11 * m0);
  EXPECT_GE(*std::min_element(p.begin(), p.end()), 0.0);
}

TEST(Kernels, GibbsIsDiscreteFixedPoint) {
  // Scharfetter-Gummel fluxes vanish exactly on u proportional to e^{-L/D}.
  const auto grid = GridSpec::line(-3, 3, 120);
  const double d = 0.4;
  const auto c = ou_coefficients(grid, d);
  std::vector<double> p(grid.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(-0.5 * grid.point(i).squaredNorm() / d);
  std::vector<double> next;
  kernels::explicit_step_serial(c, p, next, c.explicit_bound());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(next[i], p[i], 1e-13);
}

TEST(Kernels, ResolveWorkers) {
  EXPECT_EQ(kernels::resolve_workers(3), 3);
  EXPECT_GE(kernels::resolve_workers(0), 1);
}
