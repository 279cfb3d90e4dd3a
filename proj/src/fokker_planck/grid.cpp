#include "sgdlab/fokker_planck/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgdlab/core/csv.hpp"

namespace sgdlab {

GridSpec GridSpec::line(double lo, double hi, int n) {
  GridSpec g;
  g.dimension = 1;
  g.lo = {lo, 0.0};
  g.hi = {hi, 1.0};
  g.cells = {n, 1};
  g.validate();
  return g;
}

GridSpec GridSpec::plane(double lo0, double hi0, int n0, double lo1, double hi1, int n1) {
  GridSpec g;
  g.dimension = 2;
  g.lo = {lo0, lo1};
  g.hi = {hi0, hi1};
  g.cells = {n0, n1};
  g.validate();
  return g;
}

GridSpec GridSpec::covering(const CriticalPointCatalog& catalog, double eta, int cells_per_axis,
                            double margin_sigmas) {
  if (catalog.minima.empty()) throw std::invalid_argument("catalog has no minima");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  const int d = static_cast<int>(catalog.minima.front().location.size());
  if (d < 1 || d > 2) throw std::invalid_argument("grids support dimension 1 or 2");
  double lambda_min = std::numeric_limits<double>::infinity();
  Vec lo = catalog.minima.front().location, hi = lo;
  for (const auto& m : catalog.minima) {
    lambda_min = std::min(lambda_min, m.eigenvalues.minCoeff());
    lo = lo.cwiseMin(m.location);
    hi = hi.cwiseMax(m.location);
  }
  for (const auto& s : catalog.saddles) {
    lo = lo.cwiseMin(s.location);
    hi = hi.cwiseMax(s.location);
  }
  // The span term keeps the outer 5% of cells (the tail check) clear of
  // the wells when they are far apart relative to their width.
  const double base = std::max(margin_sigmas, 3.0) / std::sqrt(eta * lambda_min);
  const Vec margin = (base + 0.07 * (hi - lo).array()).matrix();
  if (d == 1) return line(lo[0] - margin[0], hi[0] + margin[0], cells_per_axis);
  return plane(lo[0] - margin[0], hi[0] + margin[0], cells_per_axis, lo[1] - margin[1],
               hi[1] + margin[1], cells_per_axis);
}

double GridSpec::cell_volume() const {
  return dimension == 1 ? spacing(0) : spacing(0) * spacing(1);
}

std::size_t GridSpec::size() const {
  return static_cast<std::size_t>(cells[0]) * static_cast<std::size_t>(dimension == 2 ? cells[1] : 1);
}

Vec GridSpec::point(std::size_t index) const {
  Vec w(dimension);
  const auto nx = static_cast<std::size_t>(cells[0]);
  w[0] = center(0, static_cast<int>(index % nx));
  if (dimension == 2) w[1] = center(1, static_cast<int>(index / nx));
  return w;
}

bool GridSpec::operator==(const GridSpec& o) const {
  if (dimension != o.dimension) return false;
  for (int a = 0; a < dimension; ++a) {
    if (lo[a] != o.lo[a] || hi[a] != o.hi[a] || cells[a] != o.cells[a]) return false;
  }
  return true;
}

void GridSpec::validate() const {
  if (dimension != 1 && dimension != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  for (int a = 0; a < dimension; ++a) {
    if (cells[a] < 3) throw std::invalid_argument("grid needs at least 3 cells per axis");
    if (!(hi[a] > lo[a])) throw std::invalid_argument("grid bounds must satisfy lo < hi");
  }
  if (dimension == 2 && (cells[0] > 512 || cells[1] > 512)) {
    throw std::invalid_argument("2D grids are limited to 512 x 512 cells");
  }
}

nlohmann::json GridSpec::to_json() const {
  nlohmann::json j = {{"dimension", dimension}};
  j["lo"] = std::vector<double>(lo.begin(), lo.begin() + dimension);
  j["hi"] = std::vector<double>(hi.begin(), hi.begin() + dimension);
  j["cells"] = std::vector<int>(cells.begin(), cells.begin() + dimension);
  return j;
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
  const auto lo = j.at("lo").get<std::vector<double>>();
  const auto hi = j.at("hi").get<std::vector<double>>();
  const auto n = j.at("cells").get<std::vector<int>>();
  if (lo.size() != hi.size() || lo.size() != n.size()) {
    throw std::invalid_argument("grid lo/hi/cells must have equal length");
  }
  if (lo.size() == 1) return line(lo[0], hi[0], n[0]);
  if (lo.size() == 2) return plane(lo[0], hi[0], n[0], lo[1], hi[1], n[1]);
  throw std::invalid_argument("grid dimension must be 1 or 2");
}

DensityField DensityField::zeros(const GridSpec& grid) {
  grid.validate();
  return {grid, std::vector<double>(grid.size(), 0.0)};
}

DensityField DensityField::gaussian(const GridSpec& grid, const Vec& center, double std_cells) {
  DensityField f = zeros(grid);
  if (center.size() != grid.dimension) throw std::invalid_argument("center dimension mismatch");
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const Vec w = grid.point(k);
    double e = 0.0;
    for (int a = 0; a < grid.dimension; ++a) {
      const double s = std_cells * grid.spacing(a);
      const double z = (w[a] - center[a]) / s;
      e += 0.5 * z * z;
    }
    f.values[k] = std::exp(-e);
  }
  if (!(f.mass() > 0.0)) throw std::invalid_argument("initial Gaussian lies outside the grid");
  f.normalize();
  return f;
}

double DensityField::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

void DensityField::normalize() {
  const double m = mass();
  for (double& v : values) v /= m;
}

double DensityField::mean(int axis) const {
  double s = 0.0, z = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    s += values[k] * grid.point(k)[axis];
    z += values[k];
  }
  return s / z;
}

double DensityField::variance(int axis) const {
  const double m = mean(axis);
  double s = 0.0, z = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = grid.point(k)[axis] - m;
    s += values[k] * x * x;
    z += values[k];
  }
  return s / z;
}

double DensityField::min_value() const { return *std::min_element(values.begin(), values.end()); }

double DensityField::tail_fraction() const {
  const int nx = grid.cells[0];
  const int ny = grid.dimension == 2 ? grid.cells[1] : 1;
  const int bx = std::max(1, static_cast<int>(std::ceil(0.05 * nx)));
  const int by = grid.dimension == 2 ? std::max(1, static_cast<int>(std::ceil(0.05 * ny))) : 0;
  double tail = 0.0, total = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = values[grid.index(i, j)];
      total += v;
      const bool outer = i < bx || i >= nx - bx || (grid.dimension == 2 && (j < by || j >= ny - by));
      if (outer) tail += v;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

void DensityField::write_csv(std::ostream& out) const {
  std::vector<std::string> header = grid.dimension == 1 ? std::vector<std::string>{"x", "p"}
                                                        : std::vector<std::string>{"x", "y", "p"};
  csv::Writer w(out, header);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Vec c = grid.point(k);
    for (int a = 0; a < grid.dimension; ++a) w.field(c[a]);
    w.field(values[k]);
    w.end_row();
  }
}

}  // namespace sgdlab
