#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sgdlab/landscape/families.hpp"
#include "sgdlab/stationary/flatness.hpp"
#include "sgdlab/stationary/occupation.hpp"
#include "sgdlab/stationary/probability.hpp"

using namespace sgdlab;

namespace {

WellSpec w1(double x, double lambda) { return {Vec::Constant(1, x), 0.0, Vec::Constant(1, lambda), {}}; }

WellSpec w2(double x, double y, double a, double b) {
  Vec at(2), eig(2);
  at << x, y;
  eig << a, b;
  return {at, 0.0, eig, {}};
}

}  // namespace

TEST(Probability, QuadraticBallMatchesErf) {
  // For L = lambda x^2 / 2 the Gibbs ball mass is erf(eps sqrt(eta lambda / 2)).
  for (double lambda : {4.5, 12.5}) {
    for (double eta : {2.0, 10.0}) {
      const auto [land, cat] = make_quadratic({lambda});
      const auto p = minimizer_probability(land, cat, 0, eta, 0.1);
      const double exact = std::erf(0.1 * std::sqrt(eta * lambda / 2));
      EXPECT_NEAR(p.quadrature, exact, 1e-7) << lambda << " " << eta;
      EXPECT_LT(p.quadrature_error, 1e-6);
    }
  }
}

TEST(Probability, TwoDimensionalQuadraticBall) {
  // Isotropic 2D Gaussian: ball mass 1 - e^{-eta lambda eps^2 / 2}.
  const auto [land, cat] = make_quadratic({6.0, 6.0});
  const auto p = minimizer_probability(land, cat, 0, 5.0, 0.1);
  EXPECT_NEAR(p.quadrature, 1 - std::exp(-5.0 * 6.0 * 0.01 / 2), 1e-6);
}

TEST(Probability, ComponentsMultiplyToClosedForm) {
  const auto [land, cat] = make_multiwell({w2(0, 0, 15, 20), w2(2, 0, 14.22, 42.66)});
  for (double eta : {2.0, 10.0, 40.0}) {
    for (int id : {0, 1}) {
      const auto p = minimizer_probability(land, cat, id, eta, 0.1);
      const auto& c = p.components;
      const double prod = c.kappa * c.exp_factor * c.determinant_factor * c.product_term *
                          c.eps_factor * c.normalization;
      EXPECT_NEAR(prod / p.closed_form, 1.0, 1e-12);
      EXPECT_DOUBLE_EQ(c.normalization, M_PI * M_PI);
      EXPECT_GE(p.quadrature, 0.0);
      EXPECT_LE(p.quadrature, 1.0);
    }
  }
}

TEST(Probability, ClosedFormApproachesQuadratureAsEpsShrinks) {
  const auto [land, cat] = make_quadratic({12.5});
  double previous = 1.0;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const auto p = minimizer_probability(land, cat, 0, 4.0, eps);
    EXPECT_LT(p.relative_gap, previous);
    previous = p.relative_gap;
  }
  EXPECT_LT(previous, 0.01);
}

TEST(Probability, DeterminantFactorScaling) {
  // Scaling the Hessian by c scales eta^{-d/2} / sqrt(det) by c^{-d/2}.
  const double c = 3.0;
  const auto a = make_quadratic({2.0, 5.0});
  const auto b = make_quadratic({2.0 * c, 5.0 * c});
  const auto pa = minimizer_probability(a.first, a.second, 0, 4.0, 0.05);
  const auto pb = minimizer_probability(b.first, b.second, 0, 4.0, 0.05);
  EXPECT_NEAR(pb.components.determinant_factor / pa.components.determinant_factor, 1.0 / c, 1e-12);
}

TEST(Probability, EqualDepthRatio) {
  const auto [land, cat] = make_multiwell({w1(-0.5, 4.5), w1(0.5, 12.5)});
  const auto r = probability_ratio(cat, 0, 1, 6.0, 0.1);
  EXPECT_EQ(r.label, "equal-depth");
  EXPECT_NEAR(r.value, 5.0 / 3.0, 1e-12);
  const auto inv = probability_ratio(cat, 1, 0, 6.0, 0.1);
  EXPECT_NEAR(r.value * inv.value, 1.0, 1e-12);
  // Independent of eta and eps.
  EXPECT_EQ(probability_ratio(cat, 0, 1, 30.0, 0.3).value, r.value);
}

TEST(Probability, UnequalDepthUsesGeneralRatio) {
  WellSpec a = w1(-1.0, 4.0), b = w1(1.0, 4.0);
  b.depth = 0.1;
  const auto [land, cat] = make_multiwell({a, b});
  const auto r = probability_ratio(cat, 0, 1, 5.0, 0.1);
  EXPECT_EQ(r.label, "general");
  EXPECT_NEAR(r.value, std::exp(5.0 * 0.1), 1e-9);
}

TEST(Probability, KappaCancelsInRatio) {
  const auto [land, cat] = make_multiwell({w1(-0.5, 4.5), w1(0.5, 12.5)});
  const auto n1 = gibbs_normalizer(land, cat, 6.0);
  const auto n2 = gibbs_normalizer(land, cat, 6.0, 2001, 10.0);
  const auto a = minimizer_probability(land, cat, 0, 6.0, 0.1, n1).closed_form /
                 minimizer_probability(land, cat, 1, 6.0, 0.1, n1).closed_form;
  const auto b = minimizer_probability(land, cat, 0, 6.0, 0.1, n2).closed_form /
                 minimizer_probability(land, cat, 1, 6.0, 0.1, n2).closed_form;
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_NEAR(n1.kappa, n2.kappa, 1e-6 * n1.kappa);
}

TEST(Probability, BallOutsideGridThrows) {
  const auto [land, cat] = make_quadratic({4.0});
  EXPECT_THROW(minimizer_probability(land, cat, 0, 50.0, 5.0), std::invalid_argument);
}

TEST(Probability, ExceedsOneFlag) {
  const auto [land, cat] = make_quadratic({15.0, 20.0});
  const auto p = minimizer_probability(land, cat, 0, 400.0, 0.1);
  EXPECT_EQ(p.closed_form_exceeds_one, p.closed_form > 1.0);
  EXPECT_LE(p.quadrature, 1.0);
}

TEST(Occupation, SerialAndParallelIdentical) {
  const auto [land, cat] = make_multiwell({w1(-0.5, 4.5), w1(0.5, 12.5)});
  OccupationOptions s;
  s.serial = true;
  s.streams = 4;
  OccupationOptions p = s;
  p.serial = false;
  p.workers = 2;
  const auto a = occupation_ratio_mc(land, cat, 0, 1, 4.0, 0.45, 10.0, 300.0, 0.008, 1, s);
  const auto b = occupation_ratio_mc(land, cat, 0, 1, 4.0, 0.45, 10.0, 300.0, 0.008, 1, p);
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_EQ(a.stream_ratios, b.stream_ratios);
  EXPECT_EQ(a.closed_form_label, "equal-depth");
  EXPECT_FALSE(a.warnings.empty());  // far shorter than 100 Kramers times
}

TEST(Flatness, Example2Checks) {
  const auto t = appendix_h_example(2, default_m_over_gamma(2));
  EXPECT_TRUE(t.all_checks_pass());
  ASSERT_EQ(t.series.size(), 4u);
  EXPECT_EQ(t.m_over_gamma.size(), 8u);
  // eta = 2 (M / gamma) / beta
  EXPECT_NEAR(t.eta[0][0], 2.0 * t.m_over_gamma[0] / 5.0, 1e-15);
  std::ostringstream p, d;
  t.write_probabilities_csv(p);
  t.write_differences_csv(d);
  EXPECT_EQ(p.str().substr(0, 12), "m_over_gamma");
  EXPECT_NE(d.str().find("\r\n"), std::string::npos);
}

TEST(Flatness, Example1Ordering) {
  const auto t = appendix_h_example(1, {1, 5, 10});
  EXPECT_TRUE(t.all_checks_pass());
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_GE(t.quadrature[0][k], t.quadrature[1][k]);
    EXPECT_GE(t.quadrature[1][k], t.quadrature[2][k]);
  }
}

TEST(Flatness, BadInputs) {
  EXPECT_THROW(appendix_h_example(4, {1}), std::invalid_argument);
  EXPECT_THROW(appendix_h_example(1, {0.0}), std::invalid_argument);
}
