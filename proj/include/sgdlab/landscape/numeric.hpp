#pragma once

#include "sgdlab/landscape/potential.hpp"

namespace sgdlab {

/// Centered first differences of the value.
/// Throws std::invalid_argument when w is closer than `step` to the domain boundary.
Vec numeric_gradient(const Potential& potential, const Vec& w, double step = 1e-5);

/// Centered differences of the analytic gradient, symmetrized as (J + J^T) / 2.
/// Same boundary rule as numeric_gradient.
Mat numeric_hessian(const Potential& potential, const Vec& w, double step = 1e-4);

/// Largest relative error max_i |a_i - b_i| / max(1, |b|_inf).
double relative_error(const Vec& a, const Vec& b);
double relative_error(const Mat& a, const Mat& b);

}  // namespace sgdlab
