#include "sgdlab/landscape/numeric.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgdlab {
namespace {

void require_interior(const Potential& potential, const Vec& w, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  if (w.size() != potential.dimension()) throw std::invalid_argument("dimension mismatch");
  if (!potential.domain().contains(std::span<const double>(w.data(), w.size()), step)) {
    throw std::invalid_argument("point is closer than one step to the domain boundary");
  }
}

}  // namespace

Vec numeric_gradient(const Potential& potential, const Vec& w, double step) {
  require_interior(potential, w, step);
  Vec g(w.size());
  Vec x = w;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    x[i] = w[i] + step;
    const double up = potential.value(x);
    x[i] = w[i] - step;
    const double down = potential.value(x);
    x[i] = w[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

Mat numeric_hessian(const Potential& potential, const Vec& w, double step) {
  require_interior(potential, w, step);
  const Eigen::Index d = w.size();
  Mat j(d, d);
  Vec x = w;
  for (Eigen::Index i = 0; i < d; ++i) {
    x[i] = w[i] + step;
    const Vec up = potential.gradient(x);
    x[i] = w[i] - step;
    const Vec down = potential.gradient(x);
    x[i] = w[i];
    j.col(i) = (up - down) / (2.0 * step);
  }
  return 0.5 * (j + j.transpose());
}

double relative_error(const Vec& a, const Vec& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

double relative_error(const Mat& a, const Mat& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace sgdlab
