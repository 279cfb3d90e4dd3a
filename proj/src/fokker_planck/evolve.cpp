#include "sgdlab/fokker_planck/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgdlab/core/error.hpp"
#include "sgdlab/kernels/fp_flux.hpp"

namespace sgdlab {
namespace {

std::vector<double> cell_losses(const Landscape& landscape, const GridSpec& grid) {
  std::vector<double> loss(grid.size());
  for (std::size_t k = 0; k < loss.size(); ++k) loss[k] = landscape.value(grid.point(k));
  return loss;
}

std::vector<double> cell_diffusion(const Landscape& landscape, const GridSpec& grid, double ratio) {
  std::vector<double> d(grid.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = 0.5 * ratio * landscape.beta(grid.point(k));
  return d;
}

void check_grid(const Landscape& landscape, const GridSpec& grid) {
  grid.validate();
  if (grid.dimension != landscape.dimension()) {
    throw std::invalid_argument("grid dimension does not match the landscape");
  }
}

}  // namespace

StationaryDensity stationary_density(const Landscape& landscape, double eta_inf,
                                     const GridSpec& grid) {
  check_grid(landscape, grid);
  if (!(eta_inf > 0.0)) throw std::invalid_argument("eta_inf must be > 0");
  if (!landscape.noise().is_constant()) {
    throw std::invalid_argument("stationary density needs a constant noise amplitude");
  }
  const auto loss = cell_losses(landscape, grid);
  const double lmin = *std::min_element(loss.begin(), loss.end());
  StationaryDensity out;
  out.density = DensityField::zeros(grid);
  double z = 0.0;
  for (std::size_t k = 0; k < loss.size(); ++k) {
    out.density.values[k] = std::exp(-eta_inf * (loss[k] - lmin));
    z += out.density.values[k];
  }
  z *= grid.cell_volume();
  for (double& v : out.density.values) v /= z;
  out.log_kappa = eta_inf * lmin - std::log(z);
  out.kappa = std::exp(out.log_kappa);
  out.tail_fraction = out.density.tail_fraction();
  if (out.tail_fraction >= 1e-6) {
    throw std::domain_error("grid too small: outer cells hold " + std::to_string(out.tail_fraction) +
                            " of the stationary mass (limit 1e-6)");
  }
  return out;
}

std::string to_string(TimeScheme s) {
  switch (s) {
    case TimeScheme::Auto: return "auto";
    case TimeScheme::Explicit: return "explicit";
    default: return "implicit";
  }
}

TimeScheme time_scheme_from_string(const std::string& name) {
  if (name == "auto") return TimeScheme::Auto;
  if (name == "explicit") return TimeScheme::Explicit;
  if (name == "implicit") return TimeScheme::Implicit;
  throw std::invalid_argument("unknown time scheme '" + name + "'");
}

double explicit_dt_bound(const Landscape& landscape, const Schedule& schedule,
                         const GridSpec& grid, double t) {
  check_grid(landscape, grid);
  const auto c = kernels::build_face_coefficients(grid, cell_losses(landscape, grid),
                                                  cell_diffusion(landscape, grid, schedule.ratio(t)));
  return c.explicit_bound();
}

EvolveResult evolve(const Landscape& landscape, const Schedule& schedule, const DensityField& p0,
                    double t_end, double dt, EvolveOptions options) {
  const GridSpec& grid = p0.grid;
  check_grid(landscape, grid);
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  schedule.validate(t_end);
  const double mass0 = p0.mass();
  if (std::abs(mass0 - 1.0) > 1e-8) throw std::invalid_argument("p0 must be normalized");
  if (p0.min_value() < 0.0) throw std::invalid_argument("p0 has negative cells");

  const auto loss = cell_losses(landscape, grid);
  auto coeffs = kernels::build_face_coefficients(grid, loss,
                                                 cell_diffusion(landscape, grid, schedule.ratio(0.0)));
  EvolveResult res;
  res.explicit_bound = coeffs.explicit_bound();

  TimeScheme scheme = options.scheme;
  if (scheme == TimeScheme::Auto) {
    if (res.explicit_bound < 1e-6) {
      scheme = TimeScheme::Implicit;
    } else if (dt > res.explicit_bound) {
      throw std::invalid_argument("dt = " + std::to_string(dt) + " exceeds the explicit positivity bound " +
                                  std::to_string(res.explicit_bound));
    } else {
      scheme = TimeScheme::Explicit;
    }
  }
  res.scheme_used = scheme;

  const auto n_steps = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
  const bool constant = schedule.is_constant();
  std::vector<double> p = p0.values, next(p.size());
  DensityField view{grid, {}};
  const std::size_t observe_every = std::max<std::size_t>(options.observe_every, 1);
  auto emit = [&](double t, std::size_t step) {
    const bool snap = options.snapshot_every > 0 && step % options.snapshot_every == 0;
    const bool obs = options.observer && step % observe_every == 0;
    if (!snap && !obs) return;
    view.values = p;
    if (snap) {
      res.snapshots.push_back(view);
      res.snapshot_times.push_back(t);
    }
    if (obs) options.observer(t, view);
  };
  emit(0.0, 0);

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (!constant && k > 0) {
      coeffs = kernels::build_face_coefficients(grid, loss,
                                                cell_diffusion(landscape, grid, schedule.ratio(t)));
      if (options.scheme == TimeScheme::Auto && scheme == TimeScheme::Explicit &&
          dt > coeffs.explicit_bound()) {
        throw NumericAbort("dt exceeds the explicit positivity bound", static_cast<std::int64_t>(k + 1));
      }
    }
    if (scheme == TimeScheme::Implicit) {
      kernels::implicit_step(coeffs, p, dt, options.workers);
    } else {
      if (options.serial) {
        kernels::explicit_step_serial(coeffs, p, next, dt);
      } else {
        kernels::explicit_step_parallel(coeffs, p, next, dt, options.workers);
      }
      p.swap(next);
      for (double v : p) {
        if (v < 0.0) throw NumericAbort("negative density cell", static_cast<std::int64_t>(k + 1));
      }
    }
    emit(static_cast<double>(k + 1) * dt, k + 1);
  }

  res.steps = n_steps;
  res.final_time = static_cast<double>(n_steps) * dt;
  res.final_field = DensityField{grid, std::move(p)};
  res.mass_drift = std::abs(res.final_field.mass() - mass0) / mass0;
  return res;
}

}  // namespace sgdlab
