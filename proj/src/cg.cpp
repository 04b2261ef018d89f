#include "chp/cg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chp/errors.hpp"

namespace chp {

void project_zero_mean(std::span<double> x, Exec exec) {
  if (x.empty()) return;
  const double mean = kernels::sum(exec, x) / static_cast<double>(x.size());
  for (double& v : x) v -= mean;
}

namespace {

void apply_neg_laplacian(const StencilGrid& g, std::span<const double> u, std::span<double> out, Exec exec) {
  kernels::laplacian(exec, g, u, out);
  for (double& v : out) v = -v;
}

}  // namespace

CgResult solve_singular_poisson(const StencilGrid& g, std::span<const double> b, std::span<double> x,
                                double tol, int max_iter, Exec exec) {
  const std::size_t n = b.size();
  const double bnorm = std::sqrt(kernels::dot(exec, b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0};
  }
  std::vector<double> r(n), p(n), ap(n);
  apply_neg_laplacian(g, x, ap, exec);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  project_zero_mean(r, exec);
  p = r;
  double rr = kernels::dot(exec, r, r);
  int it = 0;
  while (std::sqrt(rr) > tol * bnorm) {
    if (it >= max_iter)
      throw ConvergenceError("conjugate gradients: no convergence after " + std::to_string(it) +
                             " iterations (relative residual " + std::to_string(std::sqrt(rr) / bnorm) + ")");
    apply_neg_laplacian(g, p, ap, exec);
    const double pap = kernels::dot(exec, p, ap);
    if (!(pap > 0.0)) break;  // residual left the range of A; only rounding remains
    const double alpha = rr / pap;
    kernels::axpy(exec, alpha, p, x);
    kernels::axpy(exec, -alpha, ap, r);
    const double rr_new = kernels::dot(exec, r, r);
    kernels::xpby(exec, r, rr_new / rr, p);
    rr = rr_new;
    ++it;
  }
  project_zero_mean(x, exec);
  apply_neg_laplacian(g, x, ap, exec);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res += (b[i] - ap[i]) * (b[i] - ap[i]);
  return {it, std::sqrt(res) / bnorm};
}

}  // namespace chp
