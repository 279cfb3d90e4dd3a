#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "sgdlab/dynamics/schedule.hpp"
#include "sgdlab/fokker_planck/grid.hpp"
#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

struct StationaryDensity {
  DensityField density;
  double kappa = 0.0;      ///< normalizer of e^{-eta L}
  double log_kappa = 0.0;  ///< log kappa, finite even when kappa under/overflows
  double tail_fraction = 0.0;
};

/// Gibbs density kappa e^{-eta_inf L} sampled at cell centers and normalized
/// on the grid. Requires a constant noise amplitude. Throws
/// std::domain_error when more than 1e-6 of the mass sits in the outer 5%
/// of cells (grid too small).
StationaryDensity stationary_density(const Landscape& landscape, double eta_inf,
                                     const GridSpec& grid);

enum class TimeScheme { Auto, Explicit, Implicit };
std::string to_string(TimeScheme s);
TimeScheme time_scheme_from_string(const std::string& name);

struct EvolveOptions {
  /// Auto: explicit Euler when its positivity bound is at least 1e-6 (dt
  /// must then respect the bound), backward Euler otherwise.
  TimeScheme scheme = TimeScheme::Auto;
  /// Keep a snapshot every this many steps (0 keeps only the final field).
  std::size_t snapshot_every = 0;
  /// Called as (t, field) every `observe_every` steps and at t = 0.
  std::function<void(double, const DensityField&)> observer;
  std::size_t observe_every = 1;
  /// Use the serial explicit kernel (reference path for testing).
  bool serial = false;
  int workers = 0;
};

struct EvolveResult {
  std::vector<DensityField> snapshots;
  std::vector<double> snapshot_times;
  DensityField final_field;
  double final_time = 0.0;
  std::size_t steps = 0;
  TimeScheme scheme_used = TimeScheme::Explicit;
  double explicit_bound = 0.0;
  /// |mass(end) - mass(start)| / mass(start)
  double mass_drift = 0.0;
};

/// Largest explicit step that keeps the density nonnegative at time t.
double explicit_dt_bound(const Landscape& landscape, const Schedule& schedule,
                         const GridSpec& grid, double t = 0.0);

/// Evolves p0 under dp/dt = div(p grad L + grad(D p)), D = gamma(t) beta(w) / (2 M(t)),
/// with zero-flux walls. Throws NumericAbort if an explicit step produces a
/// negative cell, std::invalid_argument if dt exceeds the explicit bound in
/// Auto mode.
EvolveResult evolve(const Landscape& landscape, const Schedule& schedule, const DensityField& p0,
                    double t_end, double dt, EvolveOptions options = {});

}  // namespace sgdlab
