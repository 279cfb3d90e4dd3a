#include "sgdlab/fokker_planck/distance.hpp"

#include <cmath>
#include <stdexcept>

#include "sgdlab/core/csv.hpp"
#include "sgdlab/core/stats.hpp"

namespace sgdlab {

WeightedDistance weighted_l2_distance(const DensityField& p, const DensityField& p_inf) {
  if (!(p.grid == p_inf.grid) || p.values.size() != p_inf.values.size()) {
    throw std::invalid_argument("weighted distance: grids differ");
  }
  WeightedDistance out;
  double s = 0.0;
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    double q = p_inf.values[k];
    if (q < 1e-300) {
      q = 1e-300;
      ++out.floored_cells;
    }
    const double diff = p.values[k] - p_inf.values[k];
    s += diff * diff / q;
  }
  out.value = s * p.grid.cell_volume();
  return out;
}

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> distances,
                        double t_lo, double t_hi) {
  if (times.size() != distances.size()) throw std::invalid_argument("series length mismatch");
  std::vector<double> t, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (!(distances[i] > 0.0)) {
      throw std::domain_error("nonpositive distance at t = " + std::to_string(times[i]));
    }
    t.push_back(times[i]);
    y.push_back(std::log(distances[i]));
  }
  if (t.size() < 10) throw std::invalid_argument("decay fit needs at least 10 points in the window");
  const auto fit = stats::fit_line(t, y);
  return {-fit.slope, fit.r2, fit.intercept, t.size()};
}

void write_distance_csv(std::ostream& out, std::span<const double> times,
                        std::span<const double> distances) {
  csv::Writer w(out, {"t", "distance"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    w.field(times[i]);
    w.field(distances[i]);
    w.end_row();
  }
}

}  // namespace sgdlab
