#pragma once

#include <array>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgdlab/landscape/catalog.hpp"
#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

/// Uniform tensor grid of cells in one or two dimensions.
struct GridSpec {
  int dimension = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<int, 2> cells{1, 1};

  static GridSpec line(double lo, double hi, int n);
  static GridSpec plane(double lo0, double hi0, int n0, double lo1, double hi1, int n1);
  /// Box around every catalog minimum and saddle, padded per axis by
  /// margin_sigmas / sqrt(eta * lambda_min) (at least 3) plus 7% of the
  /// extent of the critical points along that axis.
  static GridSpec covering(const CriticalPointCatalog& catalog, double eta, int cells_per_axis,
                           double margin_sigmas = 6.0);

  double spacing(int axis) const { return (hi[axis] - lo[axis]) / cells[axis]; }
  double cell_volume() const;
  std::size_t size() const;
  double center(int axis, int i) const { return lo[axis] + (i + 0.5) * spacing(axis); }
  /// Cell center of the flat index (x fastest).
  Vec point(std::size_t index) const;
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cells[0]) + static_cast<std::size_t>(i);
  }
  bool operator==(const GridSpec& other) const;

  /// Throws std::invalid_argument for dimension other than 1/2, fewer than 3
  /// cells per axis, empty bounds, or more than 512 x 512 cells in 2D.
  void validate() const;
  nlohmann::json to_json() const;
  static GridSpec from_json(const nlohmann::json& j);
};

/// Nonnegative cell densities with total mass sum(values) * cell volume.
struct DensityField {
  GridSpec grid;
  std::vector<double> values;

  static DensityField zeros(const GridSpec& grid);
  /// Normalized Gaussian at `center`; std_cells is measured in cell widths.
  static DensityField gaussian(const GridSpec& grid, const Vec& center, double std_cells = 2.0);

  double mass() const;
  void normalize();
  double mean(int axis) const;
  double variance(int axis) const;
  double min_value() const;
  /// Fraction of the mass held by the outer 5% of cells along any axis.
  double tail_fraction() const;

  /// CSV with header x[,y],p.
  void write_csv(std::ostream& out) const;
};

}  // namespace sgdlab
