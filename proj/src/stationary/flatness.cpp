#include "sgdlab/stationary/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sgdlab/core/csv.hpp"
#include "sgdlab/landscape/families.hpp"
#include "sgdlab/stationary/probability.hpp"

namespace sgdlab {
namespace {

WellSpec well(std::vector<double> at, std::vector<double> eig) {
  WellSpec w;
  w.location = Eigen::Map<const Vec>(at.data(), static_cast<Eigen::Index>(at.size()));
  w.eigenvalues = Eigen::Map<const Vec>(eig.data(), static_cast<Eigen::Index>(eig.size()));
  return w;
}

std::string label(const Vec& eig) {
  std::string s = "lambda=(";
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (i) s += ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eig[i]);
    s += buf;
  }
  return s + ")";
}

// Appends one series per minimum, in the order given by `ids`.
void add_minima(AppendixHTable& t, const LandscapeWithCatalog& lc, const std::vector<int>& ids,
                double beta) {
  const std::size_t first = t.series.size();
  for (int id : ids) {
    t.series.push_back(label(lc.second.minima[static_cast<std::size_t>(id)].eigenvalues));
    t.eta.emplace_back();
    t.closed_form.emplace_back();
    t.quadrature.emplace_back();
  }
  for (double mg : t.m_over_gamma) {
    const double eta = 2.0 * mg / beta;
    const auto norm = gibbs_normalizer(lc.first, lc.second, eta);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto p = minimizer_probability(lc.first, lc.second, ids[k], eta, t.epsilon, norm);
      t.eta[first + k].push_back(eta);
      t.closed_form[first + k].push_back(p.closed_form);
      t.quadrature[first + k].push_back(p.quadrature);
    }
  }
}

// Series [first, first + count) descend at every grid point in both columns.
bool descending(const AppendixHTable& t, std::size_t first, std::size_t count) {
  for (std::size_t k = 0; k < t.m_over_gamma.size(); ++k) {
    for (std::size_t s = first; s + 1 < first + count; ++s) {
      if (t.closed_form[s][k] < t.closed_form[s + 1][k]) return false;
      if (t.quadrature[s][k] < t.quadrature[s + 1][k]) return false;
    }
  }
  return true;
}

bool differences_nondecreasing(const AppendixHTable& t) {
  for (const auto& [a, b] : t.differences) {
    for (std::size_t k = 1; k < t.m_over_gamma.size(); ++k) {
      if (t.closed_form[a][k] - t.closed_form[b][k] < t.closed_form[a][k - 1] - t.closed_form[b][k - 1])
        return false;
      if (t.quadrature[a][k] - t.quadrature[b][k] < t.quadrature[a][k - 1] - t.quadrature[b][k - 1])
        return false;
    }
  }
  return true;
}

std::vector<int> by_determinant(const CriticalPointCatalog& c) {
  std::vector<int> ids(c.minima.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    return c.minima[static_cast<std::size_t>(a)].determinant <
           c.minima[static_cast<std::size_t>(b)].determinant;
  });
  return ids;
}

}  // namespace

bool AppendixHTable::all_checks_pass() const {
  for (const auto& c : checks) {
    if (!c.second) return false;
  }
  return true;
}

void AppendixHTable::write_probabilities_csv(std::ostream& out) const {
  csv::Writer w(out, {"m_over_gamma", "series", "eta", "closed_form", "quadrature"});
  for (std::size_t k = 0; k < m_over_gamma.size(); ++k) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      w.field(m_over_gamma[k]).field(series[s]).field(eta[s][k]).field(closed_form[s][k])
          .field(quadrature[s][k]).end_row();
    }
  }
}

void AppendixHTable::write_differences_csv(std::ostream& out) const {
  csv::Writer w(out, {"m_over_gamma", "pair", "closed_form_difference", "quadrature_difference"});
  for (std::size_t k = 0; k < m_over_gamma.size(); ++k) {
    for (const auto& [a, b] : differences) {
      w.field(m_over_gamma[k]).field(series[a] + " - " + series[b])
          .field(closed_form[a][k] - closed_form[b][k])
          .field(quadrature[a][k] - quadrature[b][k]).end_row();
    }
  }
}

nlohmann::json AppendixHTable::manifest() const {
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [name, ok] : checks) c[name] = ok;
  return {{"example", example}, {"epsilon", epsilon}, {"m_over_gamma", m_over_gamma},
          {"series", series},   {"eta", eta},         {"checks", c}};
}

std::vector<double> default_m_over_gamma(int example) {
  if (example == 2) return {1, 2, 5, 10, 20, 30, 40, 50};
  return {1, 2, 5, 10, 15, 20, 25, 30};
}

AppendixHTable appendix_h_example(int example, std::vector<double> m_over_gamma, double epsilon) {
  if (example < 1 || example > 3) throw std::invalid_argument("example id must be 1, 2 or 3");
  if (m_over_gamma.empty()) m_over_gamma = default_m_over_gamma(example);
  for (double v : m_over_gamma) {
    if (!(v > 0.0)) throw std::invalid_argument("m_over_gamma values must be > 0");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  AppendixHTable t;
  t.example = example;
  t.epsilon = epsilon;
  t.m_over_gamma = std::move(m_over_gamma);

  if (example == 1) {
    const auto lc = make_multiwell(
        {well({-1.5}, {4.5}), well({0.0}, {12.5}), well({1.5}, {28.125})});
    add_minima(t, lc, by_determinant(lc.second), 1.0);
    t.differences = {{0, 1}, {1, 2}};
    t.checks.push_back({"ordering flat >= middle >= sharp", descending(t, 0, 3)});
    t.checks.push_back({"differences nondecreasing", differences_nondecreasing(t)});
  } else if (example == 2) {
    const std::vector<double> betas = {5, 10, 50, 100};
    for (double beta : betas) {
      const auto lc = make_quadratic({4.5}, NoiseModel::constant(beta));
      add_minima(t, lc, {0}, beta);
      char buf[32];
      std::snprintf(buf, sizeof buf, "beta=%g", beta);
      t.series.back() = buf;
    }
    t.differences = {{0, 1}, {1, 2}, {2, 3}};
    t.checks.push_back({"probability decreasing in beta", descending(t, 0, betas.size())});
    bool growth = true;
    const std::size_t last = t.m_over_gamma.size() - 1;
    for (std::size_t s = 0; s + 1 < betas.size(); ++s) {
      const double g0 = t.quadrature[s][last] - t.quadrature[s][0];
      const double g1 = t.quadrature[s + 1][last] - t.quadrature[s + 1][0];
      const double c0 = t.closed_form[s][last] - t.closed_form[s][0];
      const double c1 = t.closed_form[s + 1][last] - t.closed_form[s + 1][0];
      growth = growth && g0 > g1 && c0 > c1;
    }
    t.checks.push_back({"growth slower for larger beta", growth});
  } else {
    const double h = std::sqrt(3.0);
    const auto tri = make_multiwell({well({0.0, 0.0}, {15.0, 20.0}),
                                     well({2.0, 0.0}, {14.22, 42.66}),
                                     well({1.0, h}, {25.53, 102.13})});
    add_minima(t, tri, by_determinant(tri.second), 1.0);
    t.differences = {{0, 1}, {1, 2}};
    t.checks.push_back({"three wells ordered by determinant", descending(t, 0, 3)});
    const auto pair = make_multiwell({well({-1.5, 0.0}, {2.42, 0.022}),
                                      well({1.5, 0.0}, {2.22, 0.222})});
    add_minima(t, pair, by_determinant(pair.second), 1.0);
    t.differences.push_back({3, 4});
    t.checks.push_back({"two wells ordered by determinant", descending(t, 3, 2)});
  }
  return t;
}

}  // namespace sgdlab
