#include "sgdlab/kernels/fp_flux.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgdlab/kernels/ensemble.hpp"

namespace sgdlab::kernels {
namespace {

// New value of cell (i, j). Shared by both explicit variants so they
// perform the same floating-point operations in the same order.
inline double cell_update(const FaceCoefficients& c, const std::vector<double>& p, int i, int j,
                          double dt) {
  const GridSpec& g = c.grid;
  const int nx = g.cells[0];
  const std::size_t k = g.index(i, j);
  const double u = c.diffusion[k] * p[k];
  double out_rate = 0.0;
  double inflow = 0.0;
  const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx - 1);
  if (i + 1 < nx) {
    const std::size_t f = row + static_cast<std::size_t>(i);
    out_rate += c.left_x[f];
    inflow += c.right_x[f] * c.diffusion[k + 1] * p[k + 1];
  }
  if (i > 0) {
    const std::size_t f = row + static_cast<std::size_t>(i - 1);
    out_rate += c.right_x[f];
    inflow += c.left_x[f] * c.diffusion[k - 1] * p[k - 1];
  }
  if (g.dimension == 2) {
    const int ny = g.cells[1];
    const auto unx = static_cast<std::size_t>(nx);
    if (j + 1 < ny) {
      const std::size_t f = static_cast<std::size_t>(j) * unx + static_cast<std::size_t>(i);
      out_rate += c.left_y[f];
      inflow += c.right_y[f] * c.diffusion[k + unx] * p[k + unx];
    }
    if (j > 0) {
      const std::size_t f = static_cast<std::size_t>(j - 1) * unx + static_cast<std::size_t>(i);
      out_rate += c.right_y[f];
      inflow += c.left_y[f] * c.diffusion[k - unx] * p[k - unx];
    }
  }
  return p[k] - dt * out_rate * u + dt * inflow;
}

// Thomas algorithm for a tridiagonal system; a = sub, b = diag, cc = super.
// The matrices here are column diagonally dominant M-matrices, so no pivoting.
void thomas(std::vector<double>& a, std::vector<double>& b, std::vector<double>& cc,
            std::vector<double>& rhs) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * cc[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - cc[i] * rhs[i + 1]) / b[i];
}

// Backward Euler along one grid line. `cell(t)` maps line position to flat
// index, `face(t)` gives the face between positions t and t+1.
template <class CellFn, class FaceFn>
void implicit_line(const FaceCoefficients& c, const std::vector<double>& left,
                   const std::vector<double>& right, std::vector<double>& p, int n, double dt,
                   CellFn cell, FaceFn face) {
  std::vector<double> a(n, 0.0), b(n, 1.0), cc(n, 0.0), rhs(n);
  for (int t = 0; t < n; ++t) {
    const std::size_t k = cell(t);
    const double dk = c.diffusion[k];
    rhs[t] = p[k];
    if (t + 1 < n) {
      const std::size_t f = face(t);
      b[t] += dt * left[f] * dk;
      cc[t] = -dt * right[f] * c.diffusion[cell(t + 1)];
    }
    if (t > 0) {
      const std::size_t f = face(t - 1);
      b[t] += dt * right[f] * dk;
      a[t] = -dt * left[f] * c.diffusion[cell(t - 1)];
    }
  }
  thomas(a, b, cc, rhs);
  for (int t = 0; t < n; ++t) p[cell(t)] = std::max(rhs[t], 0.0);
}

}  // namespace

double bernoulli(double x) {
  if (std::abs(x) < 1e-10) return 1.0 - 0.5 * x;
  if (x > 700.0) return x * std::exp(-x);
  return x / std::expm1(x);
}

double FaceCoefficients::explicit_bound() const {
  const int nx = grid.cells[0];
  const int ny = grid.dimension == 2 ? grid.cells[1] : 1;
  double worst = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double r = 0.0;
      const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx - 1);
      if (i + 1 < nx) r += left_x[row + static_cast<std::size_t>(i)];
      if (i > 0) r += right_x[row + static_cast<std::size_t>(i - 1)];
      if (grid.dimension == 2) {
        const auto unx = static_cast<std::size_t>(nx);
        if (j + 1 < ny) r += left_y[static_cast<std::size_t>(j) * unx + static_cast<std::size_t>(i)];
        if (j > 0) r += right_y[static_cast<std::size_t>(j - 1) * unx + static_cast<std::size_t>(i)];
      }
      worst = std::max(worst, r * diffusion[grid.index(i, j)]);
    }
  }
  return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

FaceCoefficients build_face_coefficients(const GridSpec& grid, const std::vector<double>& loss,
                                         std::vector<double> diffusion) {
  grid.validate();
  if (loss.size() != grid.size() || diffusion.size() != grid.size()) {
    throw std::invalid_argument("face coefficients: field size does not match grid");
  }
  for (double d : diffusion) {
    if (!(d > 0.0)) throw std::invalid_argument("face coefficients: diffusion must be > 0");
  }
  FaceCoefficients c;
  c.grid = grid;
  c.diffusion = std::move(diffusion);
  const int nx = grid.cells[0];
  const int ny = grid.dimension == 2 ? grid.cells[1] : 1;
  const double hx2 = grid.spacing(0) * grid.spacing(0);
  c.left_x.resize(static_cast<std::size_t>(nx - 1) * static_cast<std::size_t>(ny));
  c.right_x.resize(c.left_x.size());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t a = grid.index(i, j), b = grid.index(i + 1, j);
      const double dface = 0.5 * (c.diffusion[a] + c.diffusion[b]);
      const double x = (loss[b] - loss[a]) / dface;
      const std::size_t f = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx - 1) +
                            static_cast<std::size_t>(i);
      c.left_x[f] = bernoulli(x) / hx2;
      c.right_x[f] = bernoulli(-x) / hx2;
    }
  }
  if (grid.dimension == 2) {
    const double hy2 = grid.spacing(1) * grid.spacing(1);
    c.left_y.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny - 1));
    c.right_y.resize(c.left_y.size());
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t a = grid.index(i, j), b = grid.index(i, j + 1);
        const double dface = 0.5 * (c.diffusion[a] + c.diffusion[b]);
        const double x = (loss[b] - loss[a]) / dface;
        const std::size_t f = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) +
                              static_cast<std::size_t>(i);
        c.left_y[f] = bernoulli(x) / hy2;
        c.right_y[f] = bernoulli(-x) / hy2;
      }
    }
  }
  return c;
}

void explicit_step_serial(const FaceCoefficients& c, const std::vector<double>& p,
                          std::vector<double>& out, double dt) {
  const int nx = c.grid.cells[0];
  const int ny = c.grid.dimension == 2 ? c.grid.cells[1] : 1;
  out.resize(p.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) out[c.grid.index(i, j)] = cell_update(c, p, i, j, dt);
}

void explicit_step_parallel(const FaceCoefficients& c, const std::vector<double>& p,
                            std::vector<double>& out, double dt, int workers) {
  const int nx = c.grid.cells[0];
  const int ny = c.grid.dimension == 2 ? c.grid.cells[1] : 1;
  out.resize(p.size());
  const auto total = static_cast<std::int64_t>(nx) * ny;
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
  for (std::int64_t k = 0; k < total; ++k) {
    const int i = static_cast<int>(k % nx);
    const int j = static_cast<int>(k / nx);
    out[static_cast<std::size_t>(k)] = cell_update(c, p, i, j, dt);
  }
}

void implicit_step(const FaceCoefficients& c, std::vector<double>& p, double dt, int workers) {
  const GridSpec& g = c.grid;
  const int nx = g.cells[0];
  const int ny = g.dimension == 2 ? g.cells[1] : 1;
  const auto unx = static_cast<std::size_t>(nx);
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
  for (int j = 0; j < ny; ++j) {
    implicit_line(
        c, c.left_x, c.right_x, p, nx, dt,
        [&](int t) { return g.index(t, j); },
        [&](int t) { return static_cast<std::size_t>(j) * (unx - 1) + static_cast<std::size_t>(t); });
  }
  if (g.dimension == 2) {
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (int i = 0; i < nx; ++i) {
      implicit_line(
          c, c.left_y, c.right_y, p, ny, dt,
          [&](int t) { return g.index(i, t); },
          [&](int t) { return static_cast<std::size_t>(t) * unx + static_cast<std::size_t>(i); });
    }
  }
}

}  // namespace sgdlab::kernels
