#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgdlab {

/// Learning rate gamma(t) and batch size M(t).
///
/// Three shapes: constant; piecewise constant (the last piece is the limit);
/// exponential relaxation from (gamma0, M0) to declared limits. Time is the
/// SDE time for simulations and the step index for SGD.
class Schedule {
 public:
  enum class Kind { Constant, Piecewise, ExpDecay };

  struct Piece {
    double start = 0.0;
    double gamma = 0.0;
    double batch = 1.0;
  };

  static Schedule constant(double gamma, double batch);
  /// Pieces sorted by start; the first must start at 0.
  static Schedule piecewise(std::vector<Piece> pieces);
  static Schedule exp_decay(double gamma0, double batch0, double gamma_inf, double batch_inf,
                            double time_scale);

  Kind kind() const { return kind_; }
  bool is_constant() const;

  double gamma(double t) const;
  double batch(double t) const;
  /// gamma(t) / M(t); the only combination the SDE depends on.
  double ratio(double t) const { return gamma(t) / batch(t); }
  /// eta(t) = 2 M(t) / (gamma(t) beta).
  double eta(double t, double beta) const { return 2.0 * batch(t) / (gamma(t) * beta); }

  double gamma_limit() const;
  double batch_limit() const;
  double eta_limit(double beta) const { return 2.0 * batch_limit() / (gamma_limit() * beta); }

  /// Problems with the schedule over [0, horizon]: non-positive gamma,
  /// M < 1, or |eta(t) - eta_inf| not eventually monotone. Field names are
  /// prefixed with `prefix` (e.g. "schedule.gamma"). Empty when valid.
  std::vector<std::string> problems(double horizon, const std::string& prefix = "schedule") const;
  /// Throws ValidationError if problems() is non-empty.
  void validate(double horizon) const;

  /// Same schedule with gamma and M multiplied by c.
  Schedule scaled(double c) const;

  nlohmann::json to_json() const;
  static Schedule from_json(const nlohmann::json& j);

 private:
  Kind kind_ = Kind::Constant;
  std::vector<Piece> pieces_;
  double gamma0_ = 0.0, batch0_ = 1.0;
  double gamma_inf_ = 0.0, batch_inf_ = 1.0;
  double time_scale_ = 1.0;
};

}  // namespace sgdlab
