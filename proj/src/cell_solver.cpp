#include "chp/cell_solver.hpp"

#include <algorithm>
#include <cmath>

#include "chp/errors.hpp"

namespace chp {

double Tensor::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

Tensor Tensor::operator+(const Tensor& o) const {
  Tensor t{dim, {}};
  for (int i = 0; i < 9; ++i) t.v[i] = v[i] + o.v[i];
  return t;
}

Tensor Tensor::operator-(const Tensor& o) const {
  Tensor t{dim, {}};
  for (int i = 0; i < 9; ++i) t.v[i] = v[i] - o.v[i];
  return t;
}

Tensor Tensor::operator*(double s) const {
  Tensor t{dim, {}};
  for (int i = 0; i < 9; ++i) t.v[i] = v[i] * s;
  return t;
}

double gradient_integral(const ReferenceCell& cell, std::span<const double> u, int axis) {
  const auto& g = cell.grid();
  const double face_area = std::pow(cell.h(), cell.dim() - 1);
  double s = 0.0;
  for (std::int32_t p = 0; p < g.active_size(); ++p) {
    const std::int32_t q = g.neighbor(p, axis, 1);
    if (q >= 0) s += u[q] - u[p];
  }
  return s * face_area;
}

std::vector<double> normal_component(const ReferenceCell& cell, int k) {
  const auto& faces = cell.grid().boundary_faces();
  std::vector<double> out(faces.size(), 0.0);
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].axis == k) out[i] = faces[i].side;
  return out;
}

std::vector<double> solve_cell_poisson(const ReferenceCell& cell, std::span<const double> source,
                                       std::span<const double> interface_flux, double tol, CgResult* stats,
                                       Exec exec) {
  const auto& g = cell.grid();
  const auto& faces = g.boundary_faces();
  if (static_cast<std::int32_t>(source.size()) != g.active_size())
    throw ParameterError("cell Poisson: source must be given on the pore cells");
  if (interface_flux.size() != faces.size())
    throw ParameterError("cell Poisson: flux data must be given on every interface face");

  const double vol = g.cell_volume();
  const double area = std::pow(cell.h(), cell.dim() - 1);
  double total = 0.0, scale = 0.0;
  for (double s : source) {
    total += s * vol;
    scale += std::abs(s) * vol;
  }
  for (double q : interface_flux) {
    total += q * area;
    scale += std::abs(q) * area;
  }
  if (std::abs(total) > 1e-10 * std::max(1.0, scale))
    throw SolvabilityError("cell Poisson: source and interface flux do not integrate to zero (net " +
                           std::to_string(total) + ")");

  std::vector<double> b(source.begin(), source.end());
  for (std::size_t i = 0; i < faces.size(); ++i) b[faces[i].cell] += interface_flux[i] / g.h()[faces[i].axis];
  project_zero_mean(b, exec);

  std::vector<double> x(b.size(), 0.0);
  std::int64_t cap = 50;
  for (int a = 0; a < cell.dim(); ++a) cap *= cell.n();
  const CgResult res = solve_singular_poisson(g, b, x, tol, static_cast<int>(std::min<std::int64_t>(cap, 1 << 30)), exec);
  if (stats) *stats = res;
  return x;
}

CorrectorV solve_corrector_v(const ReferenceCell& cell, double tol, Exec exec) {
  CorrectorV out;
  const std::vector<double> zero(static_cast<std::size_t>(cell.grid().active_size()), 0.0);
  for (int k = 0; k < cell.dim(); ++k) {
    CgResult st;
    out.xi.push_back(solve_cell_poisson(cell, zero, normal_component(cell, k), tol, &st, exec));
    out.residual.push_back(st.relative_residual);
  }
  return out;
}

namespace {

// Weak right-hand side  int (-lambda^2 m grad xi_v^k) . grad psi  as a volumetric source:
// lambda^2 m Lap_h xi_v^k with zero-flux ghosts.
std::vector<double> r_coefficient_source(const ReferenceCell& cell, const std::vector<double>& xi,
                                         double lambda, double m, Exec exec) {
  std::vector<double> s(xi.size());
  kernels::laplacian(exec, cell.grid(), xi, s);
  const double c = lambda * lambda * m;
  for (double& v : s) v *= c;
  return s;
}

std::vector<double> scaled(std::vector<double> v, double c) {
  for (double& x : v) x *= c;
  return v;
}

}  // namespace

std::vector<double> CorrectorWUnits::recombine(int k, double r) const {
  std::vector<double> out(chi_a[k]);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += r * chi_b[k][i];
  return out;
}

CorrectorWUnits solve_corrector_w_units(const ReferenceCell& cell, const CorrectorV& xv, double lambda,
                                        double m, double tol, Exec exec) {
  if (lambda < 0.0) throw ParameterError("xi_w units: lambda must be non-negative");
  if (!(m > 0.0)) throw ParameterError("xi_w units: mobility must be positive");
  CorrectorWUnits u;
  u.lambda = lambda;
  u.m = m;
  const std::size_t np = static_cast<std::size_t>(cell.grid().active_size());
  const std::vector<double> zero_src(np, 0.0);
  const std::vector<double> zero_flux(cell.grid().boundary_faces().size(), 0.0);
  const double ca = 1.0 + lambda * lambda * m;
  for (int k = 0; k < cell.dim(); ++k) {
    CgResult st;
    u.chi_a.push_back(solve_cell_poisson(cell, zero_src, scaled(normal_component(cell, k), ca), tol, &st, exec));
    u.residual_a.push_back(st.relative_residual);
    u.chi_b.push_back(
        solve_cell_poisson(cell, r_coefficient_source(cell, xv.xi[k], lambda, m, exec), zero_flux, tol, &st, exec));
    u.residual_b.push_back(st.relative_residual);
  }
  return u;
}

std::vector<std::vector<double>> solve_corrector_w_fixed_r(const ReferenceCell& cell, const CorrectorV& xv,
                                                           double lambda, double m, double r, double tol,
                                                           Exec exec) {
  std::vector<std::vector<double>> out;
  const double ca = 1.0 + lambda * lambda * m;
  for (int k = 0; k < cell.dim(); ++k) {
    auto src = r_coefficient_source(cell, xv.xi[k], lambda, m, exec);
    for (double& v : src) v *= r;
    out.push_back(solve_cell_poisson(cell, src, scaled(normal_component(cell, k), ca), tol, nullptr, exec));
  }
  return out;
}

EffectiveTensors EffectiveTensors::trivial(int dim, double m, double lambda) {
  EffectiveTensors t;
  t.dim = dim;
  t.theta1 = 1.0;
  t.D = Tensor::identity(dim);
  t.Mv = Tensor::zero(dim);
  t.Mw_a = Tensor::identity(dim, m);
  t.Mw_b = Tensor::zero(dim);
  t.m = m;
  t.lambda = lambda;
  return t;
}

Tensor effective_D(const ReferenceCell& cell, const CorrectorV& xv) {
  const int d = cell.dim();
  Tensor t = Tensor::identity(d, cell.porosity());
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) t(i, k) -= gradient_integral(cell, xv.xi[k], i);
  return t;
}

Tensor effective_Mv(const ReferenceCell& cell, const CorrectorV& xv, double m, MvForm form) {
  const int d = cell.dim();
  if (form == MvForm::theorem) return effective_D(cell, xv) * m;
  Tensor t = Tensor::zero(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) t(i, k) = m * gradient_integral(cell, xv.xi[k], i);
  return t;
}

Tensor effective_Mw_from_fields(const ReferenceCell& cell, const std::vector<std::vector<double>>& xi_w, double m) {
  const int d = cell.dim();
  Tensor t = Tensor::identity(d, m * cell.porosity());
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) t(i, k) -= m * gradient_integral(cell, xi_w[k], i);
  return t;
}

std::pair<Tensor, Tensor> effective_Mw(const ReferenceCell& cell, const CorrectorWUnits& units, double m) {
  const int d = cell.dim();
  Tensor a = effective_Mw_from_fields(cell, units.chi_a, m);
  Tensor b = Tensor::zero(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) b(i, k) = -m * gradient_integral(cell, units.chi_b[k], i);
  return {a, b};
}

CellSolution solve_cell(const ReferenceCell& cell, double lambda, double m, double tol, MvForm form, Exec exec) {
  CellSolution s;
  s.xv = solve_corrector_v(cell, tol, exec);
  s.units = solve_corrector_w_units(cell, s.xv, lambda, m, tol, exec);
  auto& t = s.tensors;
  t.dim = cell.dim();
  t.theta1 = cell.porosity();
  t.D = effective_D(cell, s.xv);
  t.Mv = effective_Mv(cell, s.xv, m, form);
  std::tie(t.Mw_a, t.Mw_b) = effective_Mw(cell, s.units, m);
  t.m = m;
  t.lambda = lambda;
  t.mv_form = form;
  return s;
}

double corrector_energy(const ReferenceCell& cell, std::span<const double> u, int k) {
  const auto& g = cell.grid();
  const double vol = g.cell_volume();
  double a = 0.0;
  for (std::int32_t p = 0; p < g.active_size(); ++p)
    for (int ax = 0; ax < cell.dim(); ++ax) {
      const std::int32_t q = g.neighbor(p, ax, 1);
      if (q >= 0) a += (u[q] - u[p]) * (u[q] - u[p]) * g.inv_h2()[ax];
    }
  return 0.5 * a * vol - gradient_integral(cell, u, k);
}

}  // namespace chp
