#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "chp/cell_geometry.hpp"
#include "chp/cg.hpp"

namespace chp {

/// Small dense d x d matrix (d <= 3), row-major.
struct Tensor {
  int dim = 2;
  std::array<double, 9> v{};

  static Tensor zero(int d) { return Tensor{d, {}}; }
  static Tensor identity(int d, double s = 1.0) {
    Tensor t{d, {}};
    for (int i = 0; i < d; ++i) t(i, i) = s;
    return t;
  }
  double& operator()(int i, int j) { return v[3 * i + j]; }
  double operator()(int i, int j) const { return v[3 * i + j]; }
  double max_abs() const;
  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor operator*(double s) const;
};

/// Volume-normalised integral over Y1 of d u / d y_axis, by pore-face sums.
double gradient_integral(const ReferenceCell& cell, std::span<const double> u, int axis);

/// Solve -Lap u = source in the pore cells with outward normal derivative
/// du/dn = interface_flux on each interface face (indexed like
/// cell.grid().boundary_faces()), periodic across the cell, zero mean.
/// Throws SolvabilityError when the data are incompatible and
/// ConvergenceError when the iteration cap 50 n^d is reached.
std::vector<double> solve_cell_poisson(const ReferenceCell& cell, std::span<const double> source,
                                       std::span<const double> interface_flux, double tol,
                                       CgResult* stats = nullptr, Exec exec = Exec::omp);

/// Outward normal component e_k . n on each interface face.
std::vector<double> normal_component(const ReferenceCell& cell, int k);

struct CorrectorV {
  std::vector<std::vector<double>> xi;  // xi[k] over pore cells
  std::vector<double> residual;         // relative residual per k
};

/// Periodic, zero-mean xi_v^k with int grad xi . grad psi = int e_k . grad psi.
CorrectorV solve_corrector_v(const ReferenceCell& cell, double tol = 1e-10, Exec exec = Exec::omp);

/// xi_w^k = chi_a^k + r chi_b^k for the constant-in-y ratio r = r(phi_0(x)).
struct CorrectorWUnits {
  std::vector<std::vector<double>> chi_a;
  std::vector<std::vector<double>> chi_b;
  std::vector<double> residual_a;
  std::vector<double> residual_b;
  double lambda = 0.0;
  double m = 1.0;

  /// chi_a^k + r chi_b^k
  std::vector<double> recombine(int k, double r) const;
};

/// Unit problems behind the xi_w cell problem (isotropic mobility m):
///   int grad xi_w . grad psi = int (e_k + lambda^2 (m e_k - r m grad xi_v^k)) . grad psi
/// split into the r-free part (chi_a) and the coefficient of r (chi_b).
CorrectorWUnits solve_corrector_w_units(const ReferenceCell& cell, const CorrectorV& xv, double lambda,
                                        double m, double tol = 1e-10, Exec exec = Exec::omp);

/// The same weak problem solved once with r fixed; the independent route for
/// checking the affine split.
std::vector<std::vector<double>> solve_corrector_w_fixed_r(const ReferenceCell& cell, const CorrectorV& xv,
                                                           double lambda, double m, double r,
                                                           double tol = 1e-10, Exec exec = Exec::omp);

/// Variant of the mobility tensor M_v.
enum class MvForm {
  appendix,  // (1/|Y|) int m d xi_v^k / d y_i
  theorem,   // (1/|Y|) int m (delta_ik - d xi_v^k / d y_i)
};

struct EffectiveTensors {
  int dim = 2;
  double theta1 = 1.0;
  Tensor D;
  Tensor Mv;
  Tensor Mw_a;
  Tensor Mw_b;
  double m = 1.0;
  double lambda = 0.0;
  MvForm mv_form = MvForm::appendix;

  /// M_w at a point where r(phi_0) = r.
  Tensor Mw(double r) const { return Mw_a + Mw_b * r; }
  /// Exact tensors of the cell without inclusion.
  static EffectiveTensors trivial(int dim, double m, double lambda);
};

Tensor effective_D(const ReferenceCell& cell, const CorrectorV& xv);
Tensor effective_Mv(const ReferenceCell& cell, const CorrectorV& xv, double m, MvForm form = MvForm::appendix);
std::pair<Tensor, Tensor> effective_Mw(const ReferenceCell& cell, const CorrectorWUnits& units, double m);
/// M_w from explicit xi_w fields (one per k).
Tensor effective_Mw_from_fields(const ReferenceCell& cell, const std::vector<std::vector<double>>& xi_w, double m);

/// Full pipeline: correctors and all tensors.
struct CellSolution {
  CorrectorV xv;
  CorrectorWUnits units;
  EffectiveTensors tensors;
};
CellSolution solve_cell(const ReferenceCell& cell, double lambda, double m, double tol = 1e-10,
                        MvForm form = MvForm::appendix, Exec exec = Exec::omp);

/// Discrete cell-problem energy 1/2 a(u,u) - b_k(u) whose minimiser is xi_v^k.
double corrector_energy(const ReferenceCell& cell, std::span<const double> u, int k);

}  // namespace chp
