#include "sgdlab/landscape/empirical.hpp"

#include <cmath>
#include <stdexcept>

#include "sgdlab/core/rng.hpp"

namespace sgdlab {
namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

class EmpiricalPotential final : public Potential {
 public:
  explicit EmpiricalPotential(const EmpiricalLandscape& e) : e_(e) {}
  int dimension() const override { return e_.dimension(); }
  double value(std::span<const double> w) const override { return e_.loss(map(w)); }
  void gradient(std::span<const double> w, std::span<double> out) const override {
    const Vec g = e_.gradient(map(w));
    std::copy(g.data(), g.data() + g.size(), out.begin());
  }
  void hessian(std::span<const double> w, std::span<double> out) const override {
    const Mat h = e_.hessian(map(w));
    const int d = dimension();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[static_cast<std::size_t>(i * d + j)] = h(i, j);
  }
  const Box& domain() const override { return e_.domain(); }

 private:
  static Vec map(std::span<const double> w) {
    return Eigen::Map<const Vec>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
  EmpiricalLandscape e_;
};

}  // namespace

std::string to_string(RegressionKind kind) {
  return kind == RegressionKind::Linear ? "linear" : "logistic";
}

RegressionKind regression_kind_from_string(const std::string& name) {
  if (name == "linear") return RegressionKind::Linear;
  if (name == "logistic") return RegressionKind::Logistic;
  throw std::invalid_argument("unknown regression kind '" + name + "'");
}

EmpiricalLandscape EmpiricalLandscape::make(RegressionKind kind, std::size_t n_samples,
                                            const Vec& true_weights, double l2_penalty,
                                            std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (true_weights.size() < 1) throw std::invalid_argument("true_weights must be non-empty");
  if (!(l2_penalty >= 0.0)) throw std::invalid_argument("l2_penalty must be >= 0");

  EmpiricalLandscape e;
  e.kind_ = kind;
  e.w0_ = true_weights;
  e.l2_ = l2_penalty;
  e.seed_ = seed;
  const auto d = true_weights.size();
  const auto n = static_cast<Eigen::Index>(n_samples);
  e.x_.resize(n, d);
  e.y_.resize(n);
  RandomStream rng(seed, 0xDA7A);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) e.x_(i, j) = rng.normal();
    const double z = e.x_.row(i).dot(true_weights);
    if (kind == RegressionKind::Linear) {
      e.y_[i] = z + rng.normal();
    } else {
      e.y_[i] = rng.uniform() < sigmoid(z) ? 1.0 : 0.0;
    }
  }
  if (kind == RegressionKind::Logistic && l2_penalty == 0.0) {
    e.warnings_.push_back(
        "logistic loss without l2 penalty is not confining");
  }
  const double half = std::max(10.0, 4.0 * true_weights.cwiseAbs().maxCoeff());
  e.box_ = {Vec::Constant(d, -half), Vec::Constant(d, half)};
  return e;
}

double EmpiricalLandscape::sample_loss(std::size_t n, const Vec& w) const {
  const auto i = static_cast<Eigen::Index>(n);
  const double z = x_.row(i).dot(w);
  const double reg = l2_ * w.squaredNorm();
  if (kind_ == RegressionKind::Linear) {
    const double r = z - y_[i];
    return 0.5 * r * r + reg;
  }
  return softplus(z) - y_[i] * z + reg;
}

void EmpiricalLandscape::add_sample_gradient(std::size_t n, const Vec& w, double scale,
                                             Vec& acc) const {
  const auto i = static_cast<Eigen::Index>(n);
  const double z = x_.row(i).dot(w);
  const double r = kind_ == RegressionKind::Linear ? z - y_[i] : sigmoid(z) - y_[i];
  acc.noalias() += (scale * r) * x_.row(i).transpose();
  if (l2_ != 0.0) acc.noalias() += (scale * 2.0 * l2_) * w;
}

Vec EmpiricalLandscape::sample_gradient(std::size_t n, const Vec& w) const {
  Vec g = Vec::Zero(w.size());
  add_sample_gradient(n, w, 1.0, g);
  return g;
}

double EmpiricalLandscape::loss(const Vec& w) const {
  const Vec z = x_ * w;
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (kind_ == RegressionKind::Linear) {
      const double r = z[i] - y_[i];
      s += 0.5 * r * r;
    } else {
      s += softplus(z[i]) - y_[i] * z[i];
    }
  }
  return s / static_cast<double>(z.size()) + l2_ * w.squaredNorm();
}

Vec EmpiricalLandscape::gradient(const Vec& w) const {
  Vec r = x_ * w;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    r[i] = kind_ == RegressionKind::Linear ? r[i] - y_[i] : sigmoid(r[i]) - y_[i];
  }
  return x_.transpose() * r / static_cast<double>(r.size()) + 2.0 * l2_ * w;
}

Mat EmpiricalLandscape::hessian(const Vec& w) const {
  const auto d = x_.cols();
  Mat h(d, d);
  if (kind_ == RegressionKind::Linear) {
    h.setZero();
    h.selfadjointView<Eigen::Lower>().rankUpdate(x_.transpose());
  } else {
    Vec s = x_ * w;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double p = sigmoid(s[i]);
      s[i] = std::sqrt(p * (1.0 - p));
    }
    const Mat xs = s.asDiagonal() * x_;
    h.setZero();
    h.selfadjointView<Eigen::Lower>().rankUpdate(xs.transpose());
  }
  h = h.selfadjointView<Eigen::Lower>();
  h /= static_cast<double>(x_.rows());
  h.diagonal().array() += 2.0 * l2_;
  return h;
}

Mat EmpiricalLandscape::dataset_gradient_covariance(const Vec& w) const {
  const auto n = x_.rows();
  const auto d = x_.cols();
  Mat g(n, d);
  for (Eigen::Index i = 0; i < n; ++i) g.row(i) = sample_gradient(static_cast<std::size_t>(i), w);
  const Vec mean = g.colwise().mean();
  const Mat centered = g.rowwise() - mean.transpose();
  return centered.transpose() * centered / static_cast<double>(n);
}

Mat EmpiricalLandscape::population_gradient_covariance(const Vec& w) const {
  if (kind_ != RegressionKind::Linear) {
    throw std::logic_error("population gradient covariance is only closed-form for linear loss");
  }
  const Vec delta = w - w0_;
  const auto d = delta.size();
  return (delta.squaredNorm() + 1.0) * Mat::Identity(d, d) + delta * delta.transpose();
}

std::shared_ptr<const Potential> EmpiricalLandscape::as_potential() const {
  return std::make_shared<EmpiricalPotential>(*this);
}

nlohmann::json EmpiricalLandscape::spec() const {
  return {{"kind", to_string(kind_)},
          {"n_samples", size()},
          {"true_weights", std::vector<double>(w0_.data(), w0_.data() + w0_.size())},
          {"l2_penalty", l2_},
          {"seed", seed_}};
}

}  // namespace sgdlab
