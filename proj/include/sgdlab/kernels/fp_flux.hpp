#pragma once

#include <vector>

#include "sgdlab/fokker_planck/grid.hpp"

namespace sgdlab::kernels {

/// Bernoulli function B(x) = x / (e^x - 1), with B(0) = 1.
double bernoulli(double x);

/// Scharfetter-Gummel face coefficients for dp/dt = div(p grad L + grad(D p)).
///
/// With u = D p, the flux through the face from cell L to cell R is
/// h * (left * u_L - right * u_R), where left = B(x) / h^2,
/// right = B(-x) / h^2 and x = (L_R - L_L) / D_face. Faces on the box
/// boundary carry no flux.
struct FaceCoefficients {
  GridSpec grid;
  std::vector<double> diffusion;  ///< D per cell
  /// x-faces: (nx - 1) per row, index j * (nx - 1) + i for the face right of cell i.
  std::vector<double> left_x, right_x;
  /// y-faces: nx per face row, index j * nx + i for the face above cell (i, j).
  std::vector<double> left_y, right_y;

  /// Largest explicit Euler step that keeps every cell nonnegative.
  double explicit_bound() const;
};

/// Builds coefficients from cell-center loss values and diffusion.
FaceCoefficients build_face_coefficients(const GridSpec& grid, const std::vector<double>& loss,
                                         std::vector<double> diffusion);

/// out = p + dt * A p. Bit-identical between the two variants.
void explicit_step_serial(const FaceCoefficients& c, const std::vector<double>& p,
                          std::vector<double>& out, double dt);
void explicit_step_parallel(const FaceCoefficients& c, const std::vector<double>& p,
                            std::vector<double>& out, double dt, int workers = 0);

/// Backward Euler (I - dt A) p_new = p, split by axis in 2D; tridiagonal
/// solves per grid line.
void implicit_step(const FaceCoefficients& c, std::vector<double>& p, double dt, int workers = 0);

}  // namespace sgdlab::kernels
