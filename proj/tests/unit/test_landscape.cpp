#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sgdlab/core/rng.hpp"
#include "sgdlab/landscape/assumptions.hpp"
#include "sgdlab/landscape/empirical.hpp"
#include "sgdlab/landscape/families.hpp"
#include "sgdlab/landscape/numeric.hpp"

using namespace sgdlab;

namespace {

WellSpec well(std::vector<double> at, std::vector<double> eig, double depth = 0.0) {
  WellSpec w;
  w.location = Eigen::Map<Vec>(at.data(), static_cast<Eigen::Index>(at.size()));
  w.eigenvalues = Eigen::Map<Vec>(eig.data(), static_cast<Eigen::Index>(eig.size()));
  w.depth = depth;
  return w;
}

// Random points inside the central half of the domain.
std::vector<Vec> probe_points(const Potential& p, int count, std::uint64_t seed) {
  RandomStream r(seed, 0);
  std::vector<Vec> out;
  const Box& b = p.domain();
  for (int i = 0; i < count; ++i) {
    Vec w(p.dimension());
    for (int k = 0; k < w.size(); ++k) {
      const double mid = 0.5 * (b.lo[k] + b.hi[k]);
      const double half = 0.25 * (b.hi[k] - b.lo[k]);
      w[k] = mid + half * (2 * r.uniform() - 1);
    }
    out.push_back(w);
  }
  return out;
}

void expect_derivatives_match(const Potential& p, double tol = 1e-6, double step = 1e-4) {
  for (const auto& w : probe_points(p, 25, 17)) {
    EXPECT_LT(relative_error(p.gradient(w), numeric_gradient(p, w)), tol) << w.transpose();
    EXPECT_LT(relative_error(p.hessian(w), numeric_hessian(p, w, step)), tol) << w.transpose();
  }
}

}  // namespace

TEST(Derivatives, DoubleWell) { expect_derivatives_match(make_double_well(0.25).first.potential()); }

TEST(Derivatives, Quadratic) { expect_derivatives_match(make_quadratic({1.0, 3.0}).first.potential()); }

TEST(Derivatives, PowerWell) { expect_derivatives_match(make_power_well(0.01, 8).first.potential(), 1e-5); }

TEST(Derivatives, Multiwell1D) {
  const auto lc = make_multiwell({well({-1.5}, {4.5}), well({0}, {12.5}), well({1.5}, {28.125})});
  expect_derivatives_match(lc.first.potential(), 1e-5);
}

TEST(Derivatives, Multiwell2D) {
  const auto lc = make_multiwell({well({0, 0}, {15, 20}), well({2, 0}, {14.22, 42.66}),
                                  well({1, std::sqrt(3.0)}, {25.53, 102.13})});
  // The soft-min ridges are sharp, so the difference step must be small.
  expect_derivatives_match(lc.first.potential(), 1e-5, 1e-6);
}

TEST(Derivatives, EmpiricalLogistic) {
  const Vec w0 = Vec::Constant(3, 0.7);
  const auto e = EmpiricalLandscape::make(RegressionKind::Logistic, 500, w0, 0.01, 3);
  const auto p = e.as_potential();
  for (const auto& w : probe_points(*p, 5, 4)) {
    EXPECT_LT(relative_error(p->gradient(w), numeric_gradient(*p, w)), 1e-6);
    EXPECT_LT(relative_error(e.hessian(w), numeric_hessian(*p, w)), 1e-6);
  }
}

TEST(Catalog, DoubleWellClosedForm) {
  const double h = 0.3;
  const auto [land, cat] = make_double_well(h);
  ASSERT_EQ(cat.minima.size(), 2u);
  ASSERT_EQ(cat.saddles.size(), 1u);
  const double c = 4 * h;
  EXPECT_DOUBLE_EQ(cat.minima[0].eigenvalues[0], 2 * c);
  EXPECT_DOUBLE_EQ(cat.saddles[0].lambda_star, c);
  EXPECT_DOUBLE_EQ(cat.barrier(0, 1).height, h);
  EXPECT_NEAR(land.value(Vec::Constant(1, 0.0)), h, 1e-15);
  EXPECT_NO_THROW(cat.validate(land.potential()));
  EXPECT_DOUBLE_EQ(land.stiffness(), 2 * c);
}

TEST(Catalog, MultiwellCoresAreExactQuadratics) {
  const auto [land, cat] =
      make_multiwell({well({-1.5}, {4.5}), well({0}, {12.5}), well({1.5}, {28.125})});
  ASSERT_EQ(cat.minima.size(), 3u);
  EXPECT_NEAR(cat.minima[0].eigenvalues[0], 4.5, 1e-9);
  EXPECT_NEAR(cat.minima[1].eigenvalues[0], 12.5, 1e-9);
  EXPECT_NEAR(cat.minima[2].eigenvalues[0], 28.125, 1e-9);
  // Inside a core, L is depth + lambda/2 x^2 exactly.
  EXPECT_NEAR(land.value(Vec::Constant(1, 0.1)), 0.5 * 12.5 * 0.01, 1e-12);
  EXPECT_GE(cat.saddles.size(), 2u);
  EXPECT_TRUE(cat.has_barrier(0, 1));
  EXPECT_TRUE(cat.has_barrier(1, 0));
  EXPECT_NO_THROW(cat.validate(land.potential()));
}

TEST(Catalog, RotatedAxesGiveRequestedEigenvalues) {
  WellSpec a = well({0, 0}, {1.0, 9.0});
  const double t = 0.6;
  a.axes = Mat(2, 2);
  a.axes << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  const auto [land, cat] = make_multiwell({a, well({3, 0}, {2.0, 2.0})});
  const Mat h = land.hessian(Vec::Zero(2));
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  EXPECT_NEAR(es.eigenvalues()[0], 1.0, 1e-9);
  EXPECT_NEAR(es.eigenvalues()[1], 9.0, 1e-9);
  EXPECT_NEAR(std::abs(es.eigenvectors().col(0).dot(a.axes.col(0))), 1.0, 1e-9);
  EXPECT_NEAR(cat.minima[0].determinant, 9.0, 1e-8);
}

TEST(Catalog, TwoDimensionalSaddlesHaveOneNegativeEigenvalue) {
  const auto [land, cat] = make_multiwell({well({-1.5, 0}, {2.42, 0.022}), well({1.5, 0}, {2.22, 0.222})});
  ASSERT_FALSE(cat.saddles.empty());
  for (const auto& s : cat.saddles) {
    EXPECT_LT(s.eigenvalues[0], 0.0);
    EXPECT_GT(s.eigenvalues[1], 0.0);
    EXPECT_LT(land.gradient(s.location).norm(), 1e-8);
  }
}

TEST(Catalog, OverlappingWellsRejected) {
  MultiwellOptions opt;
  opt.core_radius = 0.5;
  EXPECT_THROW(make_multiwell({well({0}, {1}), well({1}, {1})}, opt), std::invalid_argument);
  EXPECT_THROW(make_multiwell({well({0}, {-1}), well({3}, {1})}), std::invalid_argument);
}

TEST(Catalog, ValidateCatchesBrokenEntries) {
  auto [land, cat] = make_double_well(0.25);
  cat.minima[0].location[0] = -0.9;
  EXPECT_THROW(cat.validate(land.potential()), std::logic_error);
}

TEST(Catalog, NewtonPolishConverges) {
  const auto [land, cat] = make_double_well(0.25);
  const auto w = newton_polish(land.potential(), Vec::Constant(1, 0.8));
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR((*w)[0], 1.0, 1e-11);
}

TEST(Landscape, SpecRoundTrip) {
  const auto a = make_multiwell({well({-0.5}, {4.5}), well({0.5}, {12.5})});
  const auto b = build_landscape(a.first.spec());
  EXPECT_EQ(a.first.spec().hash(), b.first.spec().hash());
  for (double x : {-0.7, -0.2, 0.1, 0.9}) {
    const Vec w = Vec::Constant(1, x);
    EXPECT_EQ(a.first.value(w), b.first.value(w));
  }
  EXPECT_EQ(a.second.minima.size(), b.second.minima.size());
}

TEST(Landscape, NoiseModel) {
  NoiseModel n{1.0, 2.0, Vec::Constant(1, 1.0)};
  const double w[] = {3.0};
  EXPECT_DOUBLE_EQ(n.beta(w), 9.0);
  double g[1];
  n.beta_gradient(w, g);
  EXPECT_DOUBLE_EQ(g[0], 8.0);
  EXPECT_EQ(noise_from_json(noise_to_json(n)).beta(w), 9.0);
  EXPECT_TRUE(NoiseModel::constant(2.0).is_constant());
}

TEST(Empirical, PopulationCovarianceFormula) {
  const Vec w0 = Vec::Constant(2, 0.5);
  const auto e = EmpiricalLandscape::make(RegressionKind::Linear, 200000, w0, 0.0, 8);
  Vec w(2);
  w << 1.5, -0.5;
  const Vec d = w - w0;
  const Mat expected = (d.squaredNorm() + 1.0) * Mat::Identity(2, 2) + d * d.transpose();
  EXPECT_TRUE(e.population_gradient_covariance(w).isApprox(expected, 1e-14));
  // The finite dataset matches the population to sampling precision.
  EXPECT_LT(relative_error(e.dataset_gradient_covariance(w), expected), 0.05);
}

TEST(Empirical, GradientIsMeanOfSampleGradients) {
  const auto e = EmpiricalLandscape::make(RegressionKind::Logistic, 300, Vec::Constant(3, 1.0), 0.02, 9);
  const Vec w = Vec::Constant(3, 0.2);
  Vec acc = Vec::Zero(3);
  for (std::size_t n = 0; n < e.size(); ++n) e.add_sample_gradient(n, w, 1.0 / e.size(), acc);
  EXPECT_LT(relative_error(acc, e.gradient(w)), 1e-12);
  EXPECT_THROW(e.population_gradient_covariance(w), std::exception);
}

TEST(Empirical, UnregularizedLogisticIsFlagged) {
  const Vec w0 = Vec::Constant(2, 1.0);
  EXPECT_FALSE(EmpiricalLandscape::make(RegressionKind::Logistic, 100, w0, 0.0, 1).warnings().empty());
  EXPECT_TRUE(EmpiricalLandscape::make(RegressionKind::Logistic, 100, w0, 0.01, 1).warnings().empty());
}

TEST(Assumptions, ConfiningLossesPass) {
  const auto dw = make_double_well(0.25);
  const auto r = check_assumptions(dw.first.potential(), {0.5, 1.0, 1.5, 2.0, 2.4}, 50);
  EXPECT_TRUE(r.confinement_ok());
  EXPECT_TRUE(std::isfinite(r.a3_sup));

  const auto e = EmpiricalLandscape::make(RegressionKind::Logistic, 400, Vec::Constant(2, 1.0), 0.05, 2);
  const auto rl = check_assumptions(*e.as_potential(), {1, 2, 4, 6, 8}, 20);
  EXPECT_TRUE(rl.confinement_ok());
}

TEST(Assumptions, LinearFixtureFailsConfinement) {
  const auto lin = make_linear_fixture(1.0);
  const auto r = check_assumptions(lin.potential(), {1, 2, 3, 4}, 20);
  EXPECT_EQ(r.confinement, Verdict::Fail);
}
