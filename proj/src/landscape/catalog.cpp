#include "sgdlab/landscape/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sgdlab {
namespace {

constexpr double kDegenerate = 1e-10;

Vec sorted_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();  // ascending
}

void reject_degenerate(const Vec& eig, const Vec& w) {
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (std::abs(eig[i]) < kDegenerate) {
      std::ostringstream os;
      os << "degenerate Hessian at w = " << w.transpose() << " (eigenvalue " << eig[i] << ")";
      throw std::invalid_argument(os.str());
    }
  }
}

nlohmann::json vec_json(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

const Barrier& CriticalPointCatalog::barrier(int from, int to) const {
  auto it = barriers.find({from, to});
  if (it == barriers.end()) {
    throw std::out_of_range("no barrier from minimum " + std::to_string(from) + " to " +
                            std::to_string(to));
  }
  return it->second;
}

double CriticalPointCatalog::max_positive_eigenvalue() const {
  double m = 0.0;
  for (const auto& e : minima) m = std::max(m, e.eigenvalues.maxCoeff());
  for (const auto& s : saddles) m = std::max(m, s.eigenvalues.maxCoeff());
  return m;
}

void CriticalPointCatalog::validate(const Potential& potential, double gradient_tol) const {
  for (std::size_t i = 0; i < minima.size(); ++i) {
    const auto& m = minima[i];
    if (m.eigenvalues.minCoeff() <= 0.0) {
      throw std::logic_error("minimum " + std::to_string(i) + " has a non-positive eigenvalue");
    }
    if (potential.gradient(m.location).norm() > gradient_tol) {
      throw std::logic_error("minimum " + std::to_string(i) + " is not a critical point");
    }
  }
  for (std::size_t i = 0; i < saddles.size(); ++i) {
    const auto& s = saddles[i];
    const auto negatives = (s.eigenvalues.array() < 0.0).count();
    if (negatives != 1) {
      throw std::logic_error("saddle " + std::to_string(i) + " has " + std::to_string(negatives) +
                             " negative eigenvalues");
    }
    if (potential.gradient(s.location).norm() > gradient_tol) {
      throw std::logic_error("saddle " + std::to_string(i) + " is not a critical point");
    }
  }
  for (const auto& [key, b] : barriers) {
    if (b.height < 0.0) throw std::logic_error("negative barrier height");
    if (b.saddle < 0 || b.saddle >= static_cast<int>(saddles.size())) {
      throw std::logic_error("barrier references unknown saddle");
    }
  }
}

nlohmann::json CriticalPointCatalog::to_json() const {
  nlohmann::json j;
  j["minima"] = nlohmann::json::array();
  for (const auto& m : minima) {
    j["minima"].push_back({{"location", vec_json(m.location)},
                           {"loss", m.loss},
                           {"eigenvalues", vec_json(m.eigenvalues)},
                           {"determinant", m.determinant}});
  }
  j["saddles"] = nlohmann::json::array();
  for (const auto& s : saddles) {
    j["saddles"].push_back({{"location", vec_json(s.location)},
                            {"loss", s.loss},
                            {"eigenvalues", vec_json(s.eigenvalues)},
                            {"determinant", s.determinant_abs},
                            {"lambda_star", s.lambda_star}});
  }
  j["barriers"] = nlohmann::json::array();
  for (const auto& [key, b] : barriers) {
    j["barriers"].push_back({{"from", key.first},
                             {"to", key.second},
                             {"saddle", b.saddle},
                             {"height", b.height},
                             {"ambiguous", b.ambiguous}});
  }
  return j;
}

MinimumEntry make_minimum_entry(const Potential& potential, const Vec& w) {
  const Vec eig = sorted_eigenvalues(potential.hessian(w));
  reject_degenerate(eig, w);
  if (eig.minCoeff() <= 0.0) throw std::invalid_argument("point is not a local minimum");
  return {w, potential.value(w), eig, eig.prod()};
}

SaddleEntry make_saddle_entry(const Potential& potential, const Vec& w) {
  const Vec eig = sorted_eigenvalues(potential.hessian(w));
  reject_degenerate(eig, w);
  if ((eig.array() < 0.0).count() != 1) throw std::invalid_argument("point is not an index-1 saddle");
  return {w, potential.value(w), eig, -eig[0], std::abs(eig.prod())};
}

std::optional<Vec> newton_polish(const Potential& potential, Vec w, double tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const Vec g = potential.gradient(w);
    if (g.norm() <= tol) return w;
    const Mat h = potential.hessian(w);
    Eigen::FullPivLU<Mat> lu(h);
    if (!lu.isInvertible()) return std::nullopt;
    Vec step = lu.solve(g);
    // Damp steps larger than the local length scale.
    const double max_step = 0.25;
    if (step.norm() > max_step) step *= max_step / step.norm();
    w -= step;
    if (!w.allFinite()) return std::nullopt;
  }
  if (potential.gradient(w).norm() <= tol) return w;
  return std::nullopt;
}

}  // namespace sgdlab
