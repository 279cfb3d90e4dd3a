#include "sgdlab/landscape/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sgdlab {
namespace {

Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Box symmetric_box(int d, double half) {
  return {Vec::Constant(d, -half), Vec::Constant(d, half)};
}

// ---------------------------------------------------------------------------

class DoubleWellPotential final : public Potential {
 public:
  explicit DoubleWellPotential(double c) : c_(c), box_(symmetric_box(1, 2.5)) {}
  int dimension() const override { return 1; }
  double value(std::span<const double> w) const override {
    const double s = w[0] * w[0] - 1.0;
    return 0.25 * c_ * s * s;
  }
  void gradient(std::span<const double> w, std::span<double> out) const override {
    out[0] = c_ * w[0] * (w[0] * w[0] - 1.0);
  }
  void hessian(std::span<const double> w, std::span<double> out) const override {
    out[0] = c_ * (3.0 * w[0] * w[0] - 1.0);
  }
  const Box& domain() const override { return box_; }

 private:
  double c_;
  Box box_;
};

class QuadraticPotential final : public Potential {
 public:
  explicit QuadraticPotential(Vec curvatures) : k_(std::move(curvatures)) {
    const int d = static_cast<int>(k_.size());
    box_ = {Vec(d), Vec(d)};
    for (int j = 0; j < d; ++j) {
      const double half = std::max(8.0 / std::sqrt(k_[j]), 1.0);
      box_.lo[j] = -half;
      box_.hi[j] = half;
    }
  }
  int dimension() const override { return static_cast<int>(k_.size()); }
  double value(std::span<const double> w) const override {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += k_[static_cast<Eigen::Index>(j)] * w[j] * w[j];
    return 0.5 * s;
  }
  void gradient(std::span<const double> w, std::span<double> out) const override {
    for (std::size_t j = 0; j < w.size(); ++j) out[j] = k_[static_cast<Eigen::Index>(j)] * w[j];
  }
  void hessian(std::span<const double> w, std::span<double> out) const override {
    const std::size_t d = w.size();
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(d * d), 0.0);
    for (std::size_t j = 0; j < d; ++j) out[j * d + j] = k_[static_cast<Eigen::Index>(j)];
  }
  const Box& domain() const override { return box_; }

 private:
  Vec k_;
  Box box_;
};

class PowerWellPotential final : public Potential {
 public:
  PowerWellPotential(double a, int k) : a_(a), p_(2 * k), box_(symmetric_box(1, 2.0)) {}
  int dimension() const override { return 1; }
  double value(std::span<const double> w) const override {
    return 0.5 * a_ * w[0] * w[0] + std::pow(w[0], p_) / p_;
  }
  void gradient(std::span<const double> w, std::span<double> out) const override {
    out[0] = a_ * w[0] + std::pow(w[0], p_ - 1);
  }
  void hessian(std::span<const double> w, std::span<double> out) const override {
    out[0] = a_ + (p_ - 1) * std::pow(w[0], p_ - 2);
  }
  const Box& domain() const override { return box_; }

 private:
  double a_;
  int p_;
  Box box_;
};

class LinearPotential final : public Potential {
 public:
  explicit LinearPotential(double slope) : slope_(slope), box_(symmetric_box(1, 10.0)) {}
  int dimension() const override { return 1; }
  double value(std::span<const double> w) const override { return slope_ * w[0]; }
  void gradient(std::span<const double>, std::span<double> out) const override { out[0] = slope_; }
  void hessian(std::span<const double>, std::span<double> out) const override { out[0] = 0.0; }
  const Box& domain() const override { return box_; }

 private:
  double slope_;
  Box box_;
};

// ---------------------------------------------------------------------------
// Multiwell: L = S + sum_i b_i (q_i - S) + T
//   q_i  exact quadratic of well i
//   S    soft-min of all q_i at temperature tau
//   b_i  C2 radial bump, 1 on the core, 0 beyond twice the core radius
//   T    quartic tail outside a sphere enclosing every bump

struct Well {
  Vec center;
  double depth;
  Mat hessian;
  double core;  // bump core radius
};

class MultiwellPotential final : public Potential {
 public:
  MultiwellPotential(std::vector<Well> wells, double tau, double tail, Vec tail_center,
                     double tail_radius, Box box)
      : wells_(std::move(wells)),
        tau_(tau),
        tail_(tail),
        tail_center_(std::move(tail_center)),
        tail_radius_(tail_radius),
        box_(std::move(box)),
        d_(static_cast<int>(wells_.front().center.size())) {}

  int dimension() const override { return d_; }
  const Box& domain() const override { return box_; }

  double value(std::span<const double> w) const override {
    Eval e = evaluate(w, false, false);
    return e.value;
  }
  void gradient(std::span<const double> w, std::span<double> out) const override {
    Eval e = evaluate(w, true, false);
    for (int i = 0; i < d_; ++i) out[static_cast<std::size_t>(i)] = e.grad[i];
  }
  void hessian(std::span<const double> w, std::span<double> out) const override {
    Eval e = evaluate(w, true, true);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) out[static_cast<std::size_t>(i * d_ + j)] = e.hess(i, j);
  }

 private:
  struct Eval {
    double value = 0.0;
    Vec grad;
    Mat hess;
  };

  // Smootherstep bump on r in [core, 2 core]: phi, phi', phi''.
  static void bump(double r, double core, double& phi, double& dphi, double& ddphi) {
    if (r <= core) { phi = 1.0; dphi = 0.0; ddphi = 0.0; return; }
    if (r >= 2.0 * core) { phi = 0.0; dphi = 0.0; ddphi = 0.0; return; }
    const double t = (r - core) / core;
    const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    const double ds = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    const double dds = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    phi = 1.0 - s;
    dphi = -ds / core;
    ddphi = -dds / (core * core);
  }

  Eval evaluate(std::span<const double> wspan, bool want_grad, bool want_hess) const {
    const Eigen::Map<const Vec> w(wspan.data(), d_);
    const std::size_t n = wells_.size();

    // Quadratics; small fixed-size work, fine to allocate per call in d <= 2
    // would be wasteful in the SDE loop, so keep everything on the stack-ish.
    double qmin = std::numeric_limits<double>::infinity();
    thread_local std::vector<double> q;
    thread_local std::vector<Vec> g;
    q.resize(n);
    if (g.size() < n) g.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec delta = w - wells_[i].center;
      const Vec hd = wells_[i].hessian * delta;
      q[i] = wells_[i].depth + 0.5 * delta.dot(hd);
      g[i] = hd;
      qmin = std::min(qmin, q[i]);
    }
    thread_local std::vector<double> pi;
    pi.resize(n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pi[i] = std::exp(-(q[i] - qmin) / tau_);
      z += pi[i];
    }
    for (auto& p : pi) p /= z;
    const double soft = qmin - tau_ * std::log(z);

    Eval e;
    e.value = soft;
    Vec gs, gl;
    Mat hs, hl;
    if (want_grad) {
      gs = Vec::Zero(d_);
      for (std::size_t i = 0; i < n; ++i) gs += pi[i] * g[i];
      gl = gs;
    }
    if (want_hess) {
      hs = Mat::Zero(d_, d_);
      Mat outer = Mat::Zero(d_, d_);
      for (std::size_t i = 0; i < n; ++i) {
        hs += pi[i] * wells_[i].hessian;
        outer += pi[i] * g[i] * g[i].transpose();
      }
      hs -= (outer - gs * gs.transpose()) / tau_;
      hl = hs;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const Well& well = wells_[i];
      const Vec delta = w - well.center;
      const double r = delta.norm();
      if (r >= 2.0 * well.core) continue;
      double phi, dphi, ddphi;
      bump(r, well.core, phi, dphi, ddphi);
      const double gap = q[i] - soft;
      e.value += phi * gap;
      if (!want_grad) continue;
      const Vec dgap = g[i] - gs;
      Vec db = Vec::Zero(d_);
      Vec u = Vec::Zero(d_);
      if (dphi != 0.0 || ddphi != 0.0) {
        u = delta / r;
        db = dphi * u;
      }
      gl += db * gap + phi * dgap;
      if (want_hess) {
        const Mat ddgap = well.hessian - hs;
        Mat ddb = Mat::Zero(d_, d_);
        if (dphi != 0.0 || ddphi != 0.0) {
          const Mat uu = u * u.transpose();
          ddb = ddphi * uu + (dphi / r) * (Mat::Identity(d_, d_) - uu);
        }
        hl += ddb * gap + db * dgap.transpose() + dgap * db.transpose() + phi * ddgap;
      }
    }

    const Vec dc = w - tail_center_;
    const double rc = dc.norm();
    if (rc > tail_radius_) {
      const double ex = rc - tail_radius_;
      e.value += tail_ * ex * ex * ex * ex;
      if (want_grad) {
        const Vec u = dc / rc;
        gl += 4.0 * tail_ * ex * ex * ex * u;
        if (want_hess) {
          const Mat uu = u * u.transpose();
          hl += 12.0 * tail_ * ex * ex * uu +
                (4.0 * tail_ * ex * ex * ex / rc) * (Mat::Identity(d_, d_) - uu);
        }
      }
    }
    if (want_grad) e.grad = std::move(gl);
    if (want_hess) e.hess = std::move(hl);
    return e;
  }

  std::vector<Well> wells_;
  double tau_;
  double tail_;
  Vec tail_center_;
  double tail_radius_;
  Box box_;
  int d_;
};

// ---------------------------------------------------------------------------
// Saddle search

struct SaddleHit {
  Vec location;
  bool ambiguous = false;
};

std::optional<SaddleHit> saddle_on_segment_1d(const Potential& p, double a, double b) {
  const int n = 4001;
  double best = -std::numeric_limits<double>::infinity();
  double arg = a;
  std::vector<double> vals(n);
  for (int k = 0; k < n; ++k) {
    const double x = a + (b - a) * k / (n - 1);
    vals[static_cast<std::size_t>(k)] = p.value(Vec::Constant(1, x));
    if (vals[static_cast<std::size_t>(k)] > best) {
      best = vals[static_cast<std::size_t>(k)];
      arg = x;
    }
  }
  auto polished = newton_polish(p, Vec::Constant(1, arg));
  if (!polished || p.hessian(*polished)(0, 0) >= 0.0) return std::nullopt;
  return SaddleHit{*polished, false};
}

/// String method with equal-arc-length reparametrization, then a climbing
/// image refinement of the highest image and a Newton polish.
std::optional<SaddleHit> saddle_by_string(const Potential& p, const Vec& from, const Vec& to,
                                          double step) {
  constexpr int kImages = 20;
  constexpr int kRelax = 500;
  const int d = p.dimension();
  std::vector<Vec> img(kImages);
  for (int k = 0; k < kImages; ++k) img[k] = from + (to - from) * (double(k) / (kImages - 1));

  auto reparametrize = [&]() {
    std::vector<double> s(kImages, 0.0);
    for (int k = 1; k < kImages; ++k) s[k] = s[k - 1] + (img[k] - img[k - 1]).norm();
    std::vector<Vec> out(kImages);
    out.front() = img.front();
    out.back() = img.back();
    int seg = 0;
    for (int k = 1; k < kImages - 1; ++k) {
      const double target = s.back() * k / (kImages - 1);
      while (seg < kImages - 2 && s[seg + 1] < target) ++seg;
      const double len = s[seg + 1] - s[seg];
      const double t = len > 0 ? (target - s[seg]) / len : 0.0;
      out[k] = img[seg] + t * (img[seg + 1] - img[seg]);
    }
    img.swap(out);
  };

  for (int it = 0; it < kRelax; ++it) {
    for (int k = 1; k < kImages - 1; ++k) img[k] -= step * p.gradient(img[k]);
    reparametrize();
  }

  std::vector<double> energy(kImages);
  int top = 1;
  for (int k = 0; k < kImages; ++k) {
    energy[k] = p.value(img[k]);
    if (k > 0 && k < kImages - 1 && energy[k] > energy[top]) top = k;
  }
  bool ambiguous = false;
  for (int k = 1; k < kImages - 1; ++k) {
    const bool local_max = energy[k] > energy[k - 1] && energy[k] > energy[k + 1];
    if (k != top && local_max &&
        std::abs(energy[k] - energy[top]) <= 0.01 * std::abs(energy[top] - energy.front())) {
      ambiguous = true;
    }
  }

  // Climbing image: invert the force component along the path tangent.
  // The step adapts so sharp ridges (curvature far above the minima's) do
  // not make it overshoot.
  Vec x = img[top];
  const Vec tau = (img[top + 1] - img[top - 1]).normalized();
  auto force = [&](const Vec& y) {
    const Vec g = p.gradient(y);
    return Vec(-g + 2.0 * g.dot(tau) * tau);
  };
  Vec f = force(x);
  double rate = step;
  for (int it = 0; it < 20000 && f.norm() > 1e-9; ++it) {
    const Vec y = x + rate * f;
    const Vec fy = force(y);
    if (fy.norm() < f.norm()) {
      x = y;
      f = fy;
      rate = std::min(1.2 * rate, 10.0 * step);
    } else {
      rate *= 0.5;
      if (rate < 1e-14) break;
    }
  }
  (void)d;
  auto polished = newton_polish(p, x);
  if (!polished) return std::nullopt;
  const Mat h = p.hessian(*polished);
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  if ((es.eigenvalues().array() < 0.0).count() != 1) return std::nullopt;
  return SaddleHit{*polished, ambiguous};
}

void add_barrier(CriticalPointCatalog& cat, int i, int j, int saddle, bool ambiguous) {
  const double ls = cat.saddles[static_cast<std::size_t>(saddle)].loss;
  auto put = [&](int a, int b) {
    const double h = ls - cat.minima[static_cast<std::size_t>(a)].loss;
    auto it = cat.barriers.find({a, b});
    if (it != cat.barriers.end()) {
      // Keep the lowest saddle; flag near ties.
      const double other = it->second.height;
      const bool close = std::abs(other - h) <= 0.01 * std::max(std::abs(other), std::abs(h));
      if (h < other) it->second = {saddle, h, close || ambiguous};
      else it->second.ambiguous = it->second.ambiguous || close;
      return;
    }
    cat.barriers[{a, b}] = {saddle, h, ambiguous};
  };
  put(i, j);
  put(j, i);
}

int add_saddle(CriticalPointCatalog& cat, const Potential& p, const Vec& w) {
  for (std::size_t k = 0; k < cat.saddles.size(); ++k) {
    if ((cat.saddles[k].location - w).norm() < 1e-6) return static_cast<int>(k);
  }
  cat.saddles.push_back(make_saddle_entry(p, w));
  return static_cast<int>(cat.saddles.size() - 1);
}

LandscapeSpec spec_with_noise(nlohmann::json j, const NoiseModel& noise) {
  j["noise"] = noise_to_json(noise);
  return {std::move(j)};
}

}  // namespace

nlohmann::json noise_to_json(const NoiseModel& noise) {
  nlohmann::json n = {{"base", noise.base}, {"scale", noise.scale}};
  if (noise.center.size()) n["center"] = to_std(noise.center);
  return n;
}

NoiseModel noise_from_json(const nlohmann::json& j) {
  if (j.is_number()) return NoiseModel::constant(j.get<double>());
  NoiseModel n;
  n.base = j.value("base", 1.0);
  n.scale = j.value("scale", 0.0);
  if (j.contains("center")) n.center = to_vec(j.at("center").get<std::vector<double>>());
  return n;
}

LandscapeWithCatalog make_double_well(double barrier_height, NoiseModel noise) {
  if (!(barrier_height > 0.0)) throw std::invalid_argument("barrier_height must be > 0");
  const double c = 4.0 * barrier_height;
  auto pot = std::make_shared<DoubleWellPotential>(c);
  CriticalPointCatalog cat;
  cat.minima.push_back({Vec::Constant(1, -1.0), 0.0, Vec::Constant(1, 2.0 * c), 2.0 * c});
  cat.minima.push_back({Vec::Constant(1, 1.0), 0.0, Vec::Constant(1, 2.0 * c), 2.0 * c});
  cat.saddles.push_back({Vec::Constant(1, 0.0), barrier_height, Vec::Constant(1, -c), c, c});
  cat.barriers[{0, 1}] = {0, barrier_height, false};
  cat.barriers[{1, 0}] = {0, barrier_height, false};
  auto spec = spec_with_noise({{"kind", "double-well"}, {"barrier_height", barrier_height}}, noise);
  Landscape l(pot, std::move(noise), std::move(spec), cat.max_positive_eigenvalue());
  return {std::move(l), std::move(cat)};
}

LandscapeWithCatalog make_quadratic(std::vector<double> curvatures, NoiseModel noise) {
  if (curvatures.empty()) throw std::invalid_argument("quadratic needs at least one curvature");
  for (double k : curvatures) {
    if (!(k > 0.0)) throw std::invalid_argument("quadratic curvatures must be > 0");
  }
  const Vec k = to_vec(curvatures);
  auto pot = std::make_shared<QuadraticPotential>(k);
  CriticalPointCatalog cat;
  Vec eig = k;
  std::sort(eig.data(), eig.data() + eig.size());
  if (eig[0] < 1e-10) throw std::invalid_argument("degenerate quadratic curvature");
  cat.minima.push_back({Vec::Zero(k.size()), 0.0, eig, k.prod()});
  auto spec = spec_with_noise({{"kind", "quadratic"}, {"curvatures", curvatures}}, noise);
  Landscape l(pot, std::move(noise), std::move(spec), cat.max_positive_eigenvalue());
  return {std::move(l), std::move(cat)};
}

LandscapeWithCatalog make_power_well(double curvature, int half_exponent, NoiseModel noise) {
  if (!(curvature > 0.0)) throw std::invalid_argument("power well curvature must be > 0");
  if (half_exponent < 2) throw std::invalid_argument("power well half_exponent must be >= 2");
  auto pot = std::make_shared<PowerWellPotential>(curvature, half_exponent);
  CriticalPointCatalog cat;
  cat.minima.push_back(make_minimum_entry(*pot, Vec::Zero(1)));
  // Curvature at |w| = 1.5 bounds the relevant stiffness; the catalog value
  // at the bottom is tiny by construction.
  const double stiff = static_cast<const Potential&>(*pot).hessian(Vec(Vec::Constant(1, 1.5)))(0, 0);
  auto spec = spec_with_noise(
      {{"kind", "power-well"}, {"curvature", curvature}, {"half_exponent", half_exponent}}, noise);
  Landscape l(pot, std::move(noise), std::move(spec), stiff);
  return {std::move(l), std::move(cat)};
}

Landscape make_linear_fixture(double slope) {
  auto pot = std::make_shared<LinearPotential>(slope);
  NoiseModel noise = NoiseModel::constant(1.0);
  auto spec = spec_with_noise({{"kind", "linear-fixture"}, {"slope", slope}}, noise);
  return Landscape(pot, noise, std::move(spec), 0.0);
}

LandscapeWithCatalog make_multiwell(const std::vector<WellSpec>& wells, MultiwellOptions options,
                                    NoiseModel noise) {
  if (wells.empty()) throw std::invalid_argument("multiwell needs at least one well");
  const int d = static_cast<int>(wells.front().location.size());
  if (d < 1) throw std::invalid_argument("multiwell wells need a location");
  if (!(options.softness > 0.0)) throw std::invalid_argument("multiwell softness must be > 0");

  std::vector<Well> built;
  for (std::size_t i = 0; i < wells.size(); ++i) {
    const auto& ws = wells[i];
    if (ws.location.size() != d || ws.eigenvalues.size() != d) {
      throw std::invalid_argument("well " + std::to_string(i) + ": dimension mismatch");
    }
    if (!std::isfinite(ws.depth)) throw std::invalid_argument("well depth must be finite");
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!(ws.eigenvalues[j] >= 1e-10)) {
        throw std::invalid_argument("well " + std::to_string(i) +
                                    ": requested Hessian is not positive definite");
      }
    }
    Mat axes = ws.axes.size() ? ws.axes : Mat::Identity(d, d);
    if (axes.rows() != d || axes.cols() != d ||
        !(axes.transpose() * axes).isApprox(Mat::Identity(d, d), 1e-10)) {
      throw std::invalid_argument("well " + std::to_string(i) + ": axes must be orthonormal");
    }
    built.push_back({ws.location, ws.depth, axes * ws.eigenvalues.asDiagonal() * axes.transpose(), 0.0});
  }

  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < built.size(); ++i)
    for (std::size_t j = i + 1; j < built.size(); ++j)
      min_sep = std::min(min_sep, (built[i].center - built[j].center).norm());
  double core = options.core_radius;
  if (core <= 0.0) core = std::isfinite(min_sep) ? 0.25 * min_sep : 1.0;
  if (std::isfinite(min_sep) && min_sep < 4.0 * core * (1.0 - 1e-12)) {
    throw std::invalid_argument("overlapping wells: separation " + std::to_string(min_sep) +
                                " < 4 x core radius " + std::to_string(core));
  }
  for (auto& w : built) w.core = core;

  Vec centroid = Vec::Zero(d);
  for (const auto& w : built) centroid += w.center;
  centroid /= static_cast<double>(built.size());
  double reach = 0.0;
  for (const auto& w : built) reach = std::max(reach, (w.center - centroid).norm());
  const double tail_radius = reach + 2.0 * core + 0.5;

  double margin = options.domain_margin;
  if (margin <= 0.0) {
    double widest = 0.0;
    for (const auto& ws : wells) widest = std::max(widest, 1.0 / std::sqrt(ws.eigenvalues.minCoeff()));
    margin = std::max(2.0 * core + 0.5, 4.0 * widest);
  }
  Box box{Vec(d), Vec(d)};
  for (int j = 0; j < d; ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& w : built) {
      lo = std::min(lo, w.center[j]);
      hi = std::max(hi, w.center[j]);
    }
    box.lo[j] = lo - margin;
    box.hi[j] = hi + margin;
  }

  auto pot = std::make_shared<MultiwellPotential>(built, options.softness, options.tail_coefficient,
                                                  centroid, tail_radius, box);

  CriticalPointCatalog cat;
  for (const auto& w : built) {
    // Cores are exact quadratics, so the centers are critical points; the
    // polish only guards against roundoff in the blend.
    auto at = newton_polish(*pot, w.center);
    if (!at) throw std::runtime_error("multiwell: failed to polish a minimum");
    cat.minima.push_back(make_minimum_entry(*pot, *at));
  }

  if (built.size() > 1) {
    if (d == 1) {
      std::vector<int> order(built.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return built[a].center[0] < built[b].center[0]; });
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const int a = order[k], b = order[k + 1];
        auto hit = saddle_on_segment_1d(*pot, built[a].center[0], built[b].center[0]);
        if (!hit) throw std::runtime_error("multiwell: saddle search failed");
        add_barrier(cat, a, b, add_saddle(cat, *pot, hit->location), hit->ambiguous);
      }
    } else {
      double stiff = 0.0;
      for (const auto& m : cat.minima) stiff = std::max(stiff, m.eigenvalues.maxCoeff());
      const double step = 0.2 / stiff;
      for (std::size_t a = 0; a < built.size(); ++a) {
        for (std::size_t b = a + 1; b < built.size(); ++b) {
          auto hit = saddle_by_string(*pot, built[a].center, built[b].center, step);
          if (!hit) throw std::runtime_error("multiwell: string method failed to locate a saddle");
          add_barrier(cat, static_cast<int>(a), static_cast<int>(b),
                      add_saddle(cat, *pot, hit->location), hit->ambiguous);
        }
      }
    }
  }

  nlohmann::json jw = nlohmann::json::array();
  for (const auto& ws : wells) {
    nlohmann::json e = {{"location", to_std(ws.location)},
                        {"depth", ws.depth},
                        {"eigenvalues", to_std(ws.eigenvalues)}};
    if (ws.axes.size()) {
      std::vector<std::vector<double>> cols;
      for (Eigen::Index c = 0; c < ws.axes.cols(); ++c) cols.push_back(to_std(ws.axes.col(c)));
      e["axes"] = cols;
    }
    jw.push_back(e);
  }
  auto spec = spec_with_noise({{"kind", "multiwell"},
                               {"wells", jw},
                               {"softness", options.softness},
                               {"core_radius", options.core_radius},
                               {"tail_coefficient", options.tail_coefficient},
                               {"domain_margin", options.domain_margin}},
                              noise);
  Landscape l(pot, std::move(noise), std::move(spec), cat.max_positive_eigenvalue());
  return {std::move(l), std::move(cat)};
}

LandscapeWithCatalog build_landscape(const LandscapeSpec& spec) {
  const auto& j = spec.data;
  const std::string kind = j.at("kind").get<std::string>();
  NoiseModel noise = j.contains("noise") ? noise_from_json(j.at("noise"))
                     : j.contains("beta") ? NoiseModel::constant(j.at("beta").get<double>())
                                          : NoiseModel::constant(1.0);
  if (kind == "double-well") return make_double_well(j.at("barrier_height").get<double>(), noise);
  if (kind == "quadratic") return make_quadratic(j.at("curvatures").get<std::vector<double>>(), noise);
  if (kind == "power-well") {
    return make_power_well(j.at("curvature").get<double>(), j.at("half_exponent").get<int>(), noise);
  }
  if (kind == "multiwell") {
    std::vector<WellSpec> wells;
    for (const auto& e : j.at("wells")) {
      WellSpec ws;
      ws.location = to_vec(e.at("location").get<std::vector<double>>());
      ws.depth = e.value("depth", 0.0);
      ws.eigenvalues = to_vec(e.at("eigenvalues").get<std::vector<double>>());
      if (e.contains("axes")) {
        const auto cols = e.at("axes").get<std::vector<std::vector<double>>>();
        ws.axes = Mat(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) ws.axes.col(static_cast<Eigen::Index>(c)) = to_vec(cols[c]);
      }
      wells.push_back(std::move(ws));
    }
    MultiwellOptions opt;
    opt.softness = j.value("softness", opt.softness);
    opt.core_radius = j.value("core_radius", opt.core_radius);
    opt.tail_coefficient = j.value("tail_coefficient", opt.tail_coefficient);
    opt.domain_margin = j.value("domain_margin", opt.domain_margin);
    return make_multiwell(wells, opt, noise);
  }
  throw std::invalid_argument("unknown landscape kind '" + kind + "'");
}

}  // namespace sgdlab
