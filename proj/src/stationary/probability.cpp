#include "sgdlab/stationary/probability.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sgdlab/fokker_planck/solver.hpp"

namespace sgdlab {
namespace {

double unit_ball_volume(int d) { return d == 1 ? 2.0 : std::numbers::pi; }

double midpoint_1d(const Landscape& l, double c, double eps, double eta, double log_kappa, int n) {
  const double h = 2.0 * eps / n;
  double s = 0.0;
  Vec w(1);
  for (int i = 0; i < n; ++i) {
    w[0] = c - eps + (i + 0.5) * h;
    s += std::exp(log_kappa - eta * l.value(w));
  }
  return s * h;
}

double midpoint_polar(const Landscape& l, const Vec& c, double eps, double eta, double log_kappa,
                      int nr, int nt) {
  const double hr = eps / nr;
  const double ht = 2.0 * std::numbers::pi / nt;
  double s = 0.0;
  Vec w(2);
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * hr;
    double ring = 0.0;
    for (int k = 0; k < nt; ++k) {
      const double a = (k + 0.5) * ht;
      w[0] = c[0] + r * std::cos(a);
      w[1] = c[1] + r * std::sin(a);
      ring += std::exp(log_kappa - eta * l.value(w));
    }
    s += ring * r;
  }
  return s * hr * ht;
}

}  // namespace

nlohmann::json MinimizerProbability::to_json() const {
  return {{"minimum", minimum},
          {"epsilon", epsilon},
          {"eta", eta},
          {"closed_form", closed_form},
          {"closed_form_literal", closed_form_literal},
          {"closed_form_double_exponent", closed_form_double_exponent},
          {"quadrature", quadrature},
          {"quadrature_error", quadrature_error},
          {"relative_gap", relative_gap},
          {"matching_convention", matching_convention},
          {"closed_form_exceeds_one", closed_form_exceeds_one},
          {"components",
           {{"kappa", components.kappa},
            {"exp_factor", components.exp_factor},
            {"determinant_factor", components.determinant_factor},
            {"product_term", components.product_term},
            {"eps_factor", components.eps_factor},
            {"normalization", components.normalization}}}};
}

GibbsNormalizer gibbs_normalizer(const Landscape& landscape, const CriticalPointCatalog& catalog,
                                 double eta, int cells, double margin_sigmas) {
  const int d = landscape.dimension();
  if (cells <= 0) cells = d == 1 ? 4001 : 512;
  GibbsNormalizer g;
  g.grid = GridSpec::covering(catalog, eta, cells, margin_sigmas);
  const auto s = stationary_density(landscape, eta, g.grid);
  g.kappa = s.kappa;
  g.log_kappa = s.log_kappa;
  g.tail_fraction = s.tail_fraction;
  return g;
}

BallQuadrature ball_quadrature(const Landscape& landscape, const Vec& center, double epsilon,
                               double eta, double log_kappa) {
  BallQuadrature q;
  if (landscape.dimension() == 1) {
    q.coarse = midpoint_1d(landscape, center[0], epsilon, eta, log_kappa, 2000);
    q.value = midpoint_1d(landscape, center[0], epsilon, eta, log_kappa, 4000);
  } else if (landscape.dimension() == 2) {
    q.coarse = midpoint_polar(landscape, center, epsilon, eta, log_kappa, 250, 512);
    q.value = midpoint_polar(landscape, center, epsilon, eta, log_kappa, 500, 1024);
  } else {
    throw std::invalid_argument("ball quadrature supports dimension 1 or 2");
  }
  // Both rules are second order in the radial step; extrapolate.
  q.fine = q.value;
  q.value = q.fine + (q.fine - q.coarse) / 3.0;
  return q;
}

MinimizerProbability minimizer_probability(const Landscape& landscape,
                                           const CriticalPointCatalog& catalog, int id,
                                           double eta, double epsilon,
                                           const GibbsNormalizer& normalizer) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  const auto& m = catalog.minima.at(static_cast<std::size_t>(id));
  const int d = static_cast<int>(m.location.size());
  if (!(m.determinant > 0.0)) throw std::invalid_argument("degenerate minimum Hessian");
  for (int a = 0; a < d; ++a) {
    if (m.location[a] - epsilon < normalizer.grid.lo[a] ||
        m.location[a] + epsilon > normalizer.grid.hi[a]) {
      throw std::invalid_argument("epsilon-ball exceeds the normalizer grid");
    }
  }

  MinimizerProbability p;
  p.minimum = id;
  p.epsilon = epsilon;
  p.eta = eta;
  auto& c = p.components;
  c.kappa = normalizer.kappa;
  c.exp_factor = std::exp(-eta * m.loss);
  c.determinant_factor = std::pow(eta, -0.5 * d) / std::sqrt(m.determinant);
  c.product_term = 1.0;
  for (int j = 0; j < d; ++j) {
    c.product_term *= std::sqrt(-std::expm1(-epsilon * epsilon * eta * m.eigenvalues[j] / std::numbers::pi));
  }
  c.eps_factor = std::exp(eta * epsilon * epsilon);
  c.normalization = std::pow(std::numbers::pi, 0.5 * d) * unit_ball_volume(d);

  // Work in logs so kappa and e^{-eta L} may individually over/underflow.
  const double log_rest = std::log(c.determinant_factor) + std::log(c.product_term) +
                          eta * epsilon * epsilon;
  const double log_single = normalizer.log_kappa - eta * m.loss + log_rest;
  p.closed_form = std::exp(log_single + std::log(c.normalization));
  p.closed_form_double_exponent = std::exp(log_single - eta * m.loss + std::log(c.normalization));
  p.closed_form_literal = std::exp(log_single - eta * m.loss);
  p.closed_form_exceeds_one = p.closed_form > 1.0;

  const auto q = ball_quadrature(landscape, m.location, epsilon, eta, normalizer.log_kappa);
  p.quadrature = q.value;
  p.quadrature_error = std::abs(q.fine - q.coarse);
  p.relative_gap = std::abs(p.closed_form - p.quadrature) / p.quadrature;
  const double gap_double = std::abs(p.closed_form_double_exponent - p.quadrature);
  const double gap_single = std::abs(p.closed_form - p.quadrature);
  if (std::abs(eta * m.loss) < 1e-12) {
    p.matching_convention = "indistinguishable";
  } else {
    p.matching_convention = gap_single <= gap_double ? "single-exponent" : "double-exponent";
  }
  return p;
}

MinimizerProbability minimizer_probability(const Landscape& landscape,
                                           const CriticalPointCatalog& catalog, int id,
                                           double eta, double epsilon) {
  return minimizer_probability(landscape, catalog, id, eta, epsilon,
                               gibbs_normalizer(landscape, catalog, eta));
}

ProbabilityRatio probability_ratio(const CriticalPointCatalog& catalog, int id1, int id2,
                                   double eta, double epsilon) {
  const auto& a = catalog.minima.at(static_cast<std::size_t>(id1));
  const auto& b = catalog.minima.at(static_cast<std::size_t>(id2));
  if (!(a.determinant > 0.0) || !(b.determinant > 0.0)) {
    throw std::invalid_argument("degenerate minimum Hessian");
  }
  if (std::abs(a.loss - b.loss) <= 1e-9) {
    return {std::sqrt(b.determinant / a.determinant), "equal-depth"};
  }
  if (!(eta > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("eta and epsilon must be > 0");
  auto log_term = [&](const MinimumEntry& m) {
    double s = -eta * m.loss - 0.5 * std::log(m.determinant);
    for (Eigen::Index j = 0; j < m.eigenvalues.size(); ++j) {
      s += 0.5 * std::log(-std::expm1(-epsilon * epsilon * eta * m.eigenvalues[j] / std::numbers::pi));
    }
    return s;
  };
  return {std::exp(log_term(a) - log_term(b)), "general"};
}

}  // namespace sgdlab
