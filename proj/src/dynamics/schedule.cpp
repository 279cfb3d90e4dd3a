#include "sgdlab/dynamics/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgdlab/core/error.hpp"

namespace sgdlab {

Schedule Schedule::constant(double gamma, double batch) {
  Schedule s;
  s.kind_ = Kind::Constant;
  s.gamma0_ = s.gamma_inf_ = gamma;
  s.batch0_ = s.batch_inf_ = batch;
  return s;
}

Schedule Schedule::piecewise(std::vector<Piece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("piecewise schedule needs at least one piece");
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.start < b.start; });
  if (pieces.front().start != 0.0) throw std::invalid_argument("first piece must start at t = 0");
  Schedule s;
  s.kind_ = Kind::Piecewise;
  s.pieces_ = std::move(pieces);
  s.gamma0_ = s.pieces_.front().gamma;
  s.batch0_ = s.pieces_.front().batch;
  s.gamma_inf_ = s.pieces_.back().gamma;
  s.batch_inf_ = s.pieces_.back().batch;
  return s;
}

Schedule Schedule::exp_decay(double gamma0, double batch0, double gamma_inf, double batch_inf,
                             double time_scale) {
  Schedule s;
  s.kind_ = Kind::ExpDecay;
  s.gamma0_ = gamma0;
  s.batch0_ = batch0;
  s.gamma_inf_ = gamma_inf;
  s.batch_inf_ = batch_inf;
  s.time_scale_ = time_scale;
  return s;
}

bool Schedule::is_constant() const {
  if (kind_ == Kind::Constant) return true;
  if (kind_ == Kind::Piecewise) {
    return std::all_of(pieces_.begin(), pieces_.end(), [&](const Piece& p) {
      return p.gamma == gamma0_ && p.batch == batch0_;
    });
  }
  return gamma0_ == gamma_inf_ && batch0_ == batch_inf_;
}

double Schedule::gamma(double t) const {
  switch (kind_) {
    case Kind::Constant: return gamma0_;
    case Kind::Piecewise: {
      auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                 [](double v, const Piece& p) { return v < p.start; });
      return std::prev(it)->gamma;
    }
    case Kind::ExpDecay: return gamma_inf_ + (gamma0_ - gamma_inf_) * std::exp(-t / time_scale_);
  }
  return gamma0_;
}

double Schedule::batch(double t) const {
  switch (kind_) {
    case Kind::Constant: return batch0_;
    case Kind::Piecewise: {
      auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                 [](double v, const Piece& p) { return v < p.start; });
      return std::prev(it)->batch;
    }
    case Kind::ExpDecay: return batch_inf_ + (batch0_ - batch_inf_) * std::exp(-t / time_scale_);
  }
  return batch0_;
}

double Schedule::gamma_limit() const { return gamma_inf_; }
double Schedule::batch_limit() const { return batch_inf_; }

std::vector<std::string> Schedule::problems(double horizon, const std::string& prefix) const {
  std::vector<std::string> out;
  auto check = [&](double gamma, double batch) {
    bool bad_g = !(gamma > 0.0) || !std::isfinite(gamma);
    bool bad_m = !(batch >= 1.0) || !std::isfinite(batch);
    return std::pair{bad_g, bad_m};
  };
  bool bad_gamma = false, bad_batch = false;
  auto note = [&](double g, double m) {
    auto [bg, bm] = check(g, m);
    bad_gamma = bad_gamma || bg;
    bad_batch = bad_batch || bm;
  };
  switch (kind_) {
    case Kind::Constant: note(gamma0_, batch0_); break;
    case Kind::Piecewise:
      for (const auto& p : pieces_) note(p.gamma, p.batch);
      break;
    case Kind::ExpDecay:
      // Both ends bound every intermediate value.
      note(gamma0_, batch0_);
      note(gamma_inf_, batch_inf_);
      if (!(time_scale_ > 0.0)) out.push_back(prefix + ".time_scale: must be > 0");
      break;
  }
  if (bad_gamma) out.push_back(prefix + ".gamma: learning rate must be > 0");
  if (bad_batch) out.push_back(prefix + ".batch: batch size must be >= 1");
  if (out.empty() && kind_ != Kind::Constant && horizon > 0.0) {
    // |eta(t) - eta_inf| sampled on the horizon must be nonincreasing over
    // its second half (beta cancels in the comparison).
    const int n = 256;
    std::vector<double> gap(n + 1);
    const double limit = batch_inf_ / gamma_inf_;
    for (int k = 0; k <= n; ++k) {
      const double t = horizon * k / n;
      gap[static_cast<std::size_t>(k)] = std::abs(batch(t) / gamma(t) - limit);
    }
    for (int k = n / 2 + 1; k <= n; ++k) {
      if (gap[static_cast<std::size_t>(k)] > gap[static_cast<std::size_t>(k - 1)] * (1 + 1e-12)) {
        out.push_back(prefix + ": |eta(t) - eta_inf| is not eventually monotone");
        break;
      }
    }
  }
  return out;
}

void Schedule::validate(double horizon) const {
  auto p = problems(horizon);
  if (!p.empty()) throw ValidationError(std::move(p));
}

Schedule Schedule::scaled(double c) const {
  Schedule s = *this;
  s.gamma0_ *= c;
  s.batch0_ *= c;
  s.gamma_inf_ *= c;
  s.batch_inf_ *= c;
  for (auto& p : s.pieces_) {
    p.gamma *= c;
    p.batch *= c;
  }
  return s;
}

nlohmann::json Schedule::to_json() const {
  switch (kind_) {
    case Kind::Constant: return {{"kind", "constant"}, {"gamma", gamma0_}, {"batch", batch0_}};
    case Kind::Piecewise: {
      nlohmann::json p = nlohmann::json::array();
      for (const auto& x : pieces_) p.push_back({{"start", x.start}, {"gamma", x.gamma}, {"batch", x.batch}});
      return {{"kind", "piecewise"}, {"pieces", p}};
    }
    case Kind::ExpDecay:
      return {{"kind", "exp-decay"},     {"gamma", gamma0_},          {"batch", batch0_},
              {"gamma_inf", gamma_inf_}, {"batch_inf", batch_inf_}, {"time_scale", time_scale_}};
  }
  return {};
}

Schedule Schedule::from_json(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") return constant(j.at("gamma").get<double>(), j.at("batch").get<double>());
  if (kind == "piecewise") {
    std::vector<Piece> pieces;
    for (const auto& p : j.at("pieces")) {
      pieces.push_back({p.at("start").get<double>(), p.at("gamma").get<double>(),
                        p.at("batch").get<double>()});
    }
    return piecewise(std::move(pieces));
  }
  if (kind == "exp-decay") {
    return exp_decay(j.at("gamma").get<double>(), j.at("batch").get<double>(),
                     j.at("gamma_inf").get<double>(), j.at("batch_inf").get<double>(),
                     j.at("time_scale").get<double>());
  }
  throw std::invalid_argument("unknown schedule kind '" + kind + "'");
}

}  // namespace sgdlab
