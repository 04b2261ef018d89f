#pragma once

#include <span>

#include "chp/kernels.hpp"
#include "chp/stencil_grid.hpp"

namespace chp {

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - A x|| / ||b||, recomputed from scratch at exit
};

/// Conjugate gradients for A x = b with A = -L (the zero-flux masked Laplacian),
/// which is symmetric positive semidefinite with the constants as kernel.
/// b must have zero sum; x is returned with zero mean. `x` holds the initial guess.
/// Throws ConvergenceError when `max_iter` is reached before `tol`.
CgResult solve_singular_poisson(const StencilGrid& g, std::span<const double> b, std::span<double> x,
                                double tol, int max_iter, Exec exec = Exec::omp);

/// Subtract the mean.
void project_zero_mean(std::span<double> x, Exec exec = Exec::omp);

}  // namespace chp
