#include "chp/macro_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chp/errors.hpp"

namespace chp {
namespace {

struct Layout {
  int dim;
  std::array<int, 3> n;
  std::array<double, 3> h;
  std::array<std::int64_t, 3> s;
  std::array<bool, 3> periodic;
};

Layout layout_of(const MacroGrid& g) {
  return {g.dim(), g.sizes(), g.h(), g.padded_strides(), {g.periodic(0), g.periodic(1), g.periodic(2)}};
}

// div(K grad u) over the interior cells of a padded field. coef(P, Q, a, row)
// fills row a of K on the face between padded cells P and Q = P + s_a. Domain
// boundary faces (not periodic) carry only the normal part, taken from the ghost.
template <class Coef>
void flux_divergence(const Layout& L, const std::vector<double>& u, Coef&& coef, std::vector<double>& out) {
  const int d = L.dim;
  auto face_flux = [&](std::int64_t P, int a, bool boundary) {
    const std::int64_t Q = P + L.s[a];
    double row[3] = {0.0, 0.0, 0.0};
    coef(P, Q, a, row);
    double F = row[a] * (u[Q] - u[P]) / L.h[a];
    if (!boundary)
      for (int b = 0; b < d; ++b) {
        if (b == a || row[b] == 0.0) continue;
        const std::int64_t sb = L.s[b];
        F += row[b] * ((u[P + sb] - u[P - sb]) + (u[Q + sb] - u[Q - sb])) / (4.0 * L.h[b]);
      }
    return F;
  };
  std::int64_t idx = 0;
  for (int k = 0; k < L.n[2]; ++k)
    for (int j = 0; j < L.n[1]; ++j)
      for (int i = 0; i < L.n[0]; ++i, ++idx) {
        const int c[3] = {i, j, k};
        const std::int64_t P = (i + 1) + L.s[1] * (j + 1) + L.s[2] * (k + 1);
        double acc = 0.0;
        for (int a = 0; a < d; ++a) {
          const bool lo_b = c[a] == 0 && !L.periodic[a];
          const bool hi_b = c[a] == L.n[a] - 1 && !L.periodic[a];
          const double up = face_flux(P, a, hi_b);
          const double lo = face_flux(P - L.s[a], a, lo_b);
          acc += (up - lo) / L.h[a];
        }
        out[idx] = acc;
      }
}

void check_finite(const MacroGrid& grid, std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i])) continue;
    const auto c = grid.stencil().coords_of_full(static_cast<std::int64_t>(i));
    const auto x = grid.center(static_cast<std::int64_t>(i));
    std::ostringstream os;
    os << what << ": non-finite value at cell (" << c[0] << ", " << c[1] << ", " << c[2] << "), x = (" << x[0]
       << ", " << x[1] << ", " << x[2] << ")";
    throw NumericsError(os.str());
  }
}

void add_inflow(const MacroGrid& grid, std::vector<double>& out) {
  for (const auto& f : grid.stencil().boundary_faces()) {
    const FaceCondition& c = grid.face(f.outer_face);
    if (c.kind == FaceKind::inflow) out[f.cell] += c.value / grid.h()[f.axis];
  }
}

// Diagonal coefficients of the frozen implicit operator.
struct Frozen {
  std::array<double, 3> mw{0.0, 0.0, 0.0};
  std::array<double, 3> dd{0.0, 0.0, 0.0};
  double theta = 1.0;
};

void implicit_solve(const MacroGrid& grid, const Frozen& fz, const StepperConfig& cfg, std::vector<double>& delta) {
  const double dt = cfg.dt;
  const double c4 = dt * cfg.lambda * cfg.lambda / (fz.theta * fz.theta);
  const double c2 = dt * cfg.stabilization * cfg.mobility;
  const auto& mw = fz.mw;
  const auto& dd = fz.dd;
  grid.basis().solve(delta, [&](double k0, double k1, double k2) {
    const double lm = mw[0] * k0 + mw[1] * k1 + mw[2] * k2;
    const double ld = dd[0] * k0 + dd[1] * k1 + dd[2] * k2;
    return 1.0 + c4 * lm * ld - c2 * (k0 + k1 + k2);
  });
}

void check_dt(const StepperConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ParameterError("stepper: dt must be positive");
  if (cfg.lambda < 0.0) throw ParameterError("stepper: lambda must be non-negative");
  if (!(cfg.mobility > 0.0)) throw ParameterError("stepper: mobility must be positive");
  if (cfg.stabilization < 0.0) throw ParameterError("stepper: stabilisation must be non-negative");
}

void enforce_cap(const MacroGrid& grid, const StepperConfig& cfg, double m_eff) {
  const double cap = explicit_dt_cap(grid, cfg.lambda, m_eff);
  if (cfg.dt > cap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "explicit stepper: dt = " << cfg.dt << " exceeds the stability cap " << cap;
    throw ParameterError(os.str());
  }
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

std::vector<double> macro_rhs(const MacroGrid& grid, std::span<const double> phi, const EffectiveTensors& tensors,
                              const BulkFreeEnergy& energy, const WallForcing& forcing, std::vector<double>* psi_out) {
  const int d = grid.dim();
  if (tensors.dim != d) throw ParameterError("macro rhs: tensor dimension does not match the grid");
  if (!forcing.g_tilde.empty() && static_cast<std::int64_t>(forcing.g_tilde.size()) != grid.size())
    throw ParameterError("macro rhs: g~0 field size does not match the grid");
  const double theta = tensors.theta1;
  const double m = tensors.m;
  const double l2 = tensors.lambda * tensors.lambda;
  const Layout L = layout_of(grid);
  const std::size_t n = phi.size();

  const std::vector<double> pp = grid.padded(phi, GhostRule::kPhi);
  std::vector<double> fos(pp.size()), rr(pp.size());
  for (std::size_t i = 0; i < pp.size(); ++i) {
    fos[i] = energy.f_over_s(pp[i]);
    rr[i] = energy.r(pp[i]).value;
  }
  const Tensor& Mv = tensors.Mv;
  const Tensor& D = tensors.D;
  const Tensor& Ma = tensors.Mw_a;
  const Tensor& Mb = tensors.Mw_b;

  // second-order conservative part
  std::vector<double> t1(n);
  flux_divergence(L, pp, [&](std::int64_t P, std::int64_t Q, int a, double* row) {
    const double sec = energy.secant(pp[P], pp[Q]);
    const double c = 2.0 * 0.5 * (fos[P] + fos[Q]) - sec;
    for (int b = 0; b < d; ++b) row[b] = -c * Mv(a, b);
    row[a] += theta * m * sec;
  }, t1);

  // -f'(phi) div(Mv grad phi)
  std::vector<double> t2(n, 0.0);
  if (Mv.max_abs() != 0.0) {
    flux_divergence(L, pp, [&](std::int64_t, std::int64_t, int a, double* row) {
      for (int b = 0; b < d; ++b) row[b] = Mv(a, b);
    }, t2);
    for (std::size_t i = 0; i < n; ++i) t2[i] *= -energy.f_prime(phi[i]);
  }

  std::vector<double> psi(n);
  flux_divergence(L, pp, [&](std::int64_t, std::int64_t, int a, double* row) {
    for (int b = 0; b < d; ++b) row[b] = D(a, b);
  }, psi);
  if (!forcing.g_tilde.empty())
    for (std::size_t i = 0; i < n; ++i) psi[i] += forcing.sign * forcing.g_tilde[i];

  const std::vector<double> qp = grid.padded(psi, GhostRule::kMirror);
  std::vector<double> t3(n);
  flux_divergence(L, qp, [&](std::int64_t P, std::int64_t Q, int a, double* row) {
    const double r = 0.5 * (rr[P] + rr[Q]);
    for (int b = 0; b < d; ++b) row[b] = Ma(a, b) + r * Mb(a, b);
  }, t3);

  std::vector<double> out(n);
  const double c3 = l2 / theta;
  for (std::size_t i = 0; i < n; ++i) out[i] = t1[i] + t2[i] - c3 * t3[i];
  add_inflow(grid, out);
  for (double& v : out) v /= theta;
  check_finite(grid, out, "macro rhs");
  if (psi_out) *psi_out = std::move(psi);
  return out;
}

double explicit_dt_cap(const MacroGrid& grid, double lambda, double m_eff) {
  if (lambda == 0.0 || m_eff <= 0.0) return std::numeric_limits<double>::infinity();
  double hmin = grid.h()[0];
  for (int a = 1; a < grid.dim(); ++a) hmin = std::min(hmin, grid.h()[a]);
  const double d = grid.dim();
  return std::pow(hmin, 4) / (8.0 * d * d * lambda * lambda * m_eff);
}

MacroState step_macro(const MacroGrid& grid, const MacroState& state, const EffectiveTensors& tensors,
                      const BulkFreeEnergy& energy, const StepperConfig& cfg, const WallForcing& forcing) {
  check_dt(cfg);
  if (!close(cfg.lambda, tensors.lambda) || !close(cfg.mobility, tensors.m))
    throw ParameterError("step_macro: stepper lambda / mobility differ from the ones the tensors were built with");

  Frozen fz;
  fz.theta = tensors.theta1;
  double rbar = 0.0;
  for (double p : state.phi) rbar += energy.r(p).value;
  rbar /= static_cast<double>(state.phi.size());
  const Tensor mw = tensors.Mw(rbar);
  double mw_max = 0.0, d_max = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    fz.mw[a] = std::max(0.0, mw(a, a));
    fz.dd[a] = std::max(0.0, tensors.D(a, a));
    mw_max = std::max(mw_max, fz.mw[a]);
    d_max = std::max(d_max, fz.dd[a]);
  }

  MacroState next;
  std::vector<double> psi;
  std::vector<double> delta = macro_rhs(grid, state.phi, tensors, energy, forcing, &psi);
  if (cfg.scheme == Scheme::explicit_euler) {
    enforce_cap(grid, cfg, mw_max * d_max / (fz.theta * fz.theta));
    for (double& v : delta) v *= cfg.dt;
  } else {
    for (double& v : delta) v *= cfg.dt;
    implicit_solve(grid, fz, cfg, delta);
  }
  next.phi = state.phi;
  kernels::axpy(cfg.exec, 1.0, delta, next.phi);
  check_finite(grid, next.phi, "step_macro");
  next.w.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) next.w[i] = -psi[i] / fz.theta;
  next.t = state.t + cfg.dt;
  next.step = state.step + 1;
  return next;
}

std::vector<double> homogeneous_rhs(const MacroGrid& grid, std::span<const double> phi, const BulkFreeEnergy& energy,
                                    double lambda, double m, Exec exec) {
  const std::size_t n = phi.size();
  std::vector<double> lap(n), mu(n), out(n);
  kernels::ch_rhs(exec, grid.stencil(), grid.face_data(), energy, lambda, m, phi, lap, mu, out);
  return out;
}

MacroState step_homogeneous(const MacroGrid& grid, const MacroState& state, const BulkFreeEnergy& energy,
                            const StepperConfig& cfg) {
  check_dt(cfg);
  const std::size_t n = state.phi.size();
  std::vector<double> lap(n), mu(n), delta(n);
  kernels::ch_rhs(cfg.exec, grid.stencil(), grid.face_data(), energy, cfg.lambda, cfg.mobility, state.phi, lap, mu,
                  delta);
  check_finite(grid, delta, "homogeneous rhs");
  for (double& v : delta) v *= cfg.dt;
  if (cfg.scheme == Scheme::explicit_euler) {
    enforce_cap(grid, cfg, cfg.mobility);
  } else {
    Frozen fz;
    for (int a = 0; a < grid.dim(); ++a) {
      fz.mw[a] = cfg.mobility;
      fz.dd[a] = 1.0;
    }
    implicit_solve(grid, fz, cfg, delta);
  }
  MacroState next;
  next.phi = state.phi;
  kernels::axpy(cfg.exec, 1.0, delta, next.phi);
  check_finite(grid, next.phi, "step_homogeneous");
  next.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) next.w[i] = -lap[i];
  next.t = state.t + cfg.dt;
  next.step = state.step + 1;
  return next;
}

double energy_total(std::span<const double> phi, const BulkFreeEnergy& energy, double lambda,
                    const MacroGrid& grid) {
  if (lambda < 0.0) throw ParameterError("energy: lambda must be non-negative");
  const auto& g = grid.stencil();
  double bulk = 0.0, grad = 0.0;
  for (std::int32_t p = 0; p < g.active_size(); ++p) {
    bulk += energy.F(phi[p]);
    for (int a = 0; a < g.dim(); ++a) {
      const std::int32_t q = g.neighbor(p, a, 1);
      if (q < 0) continue;
      const double dq = phi[q] - phi[p];
      grad += dq * dq * g.inv_h2()[a];
    }
  }
  return g.cell_volume() * (bulk + 0.5 * lambda * lambda * grad);
}

double mass_total(std::span<const double> phi, double theta1, const MacroGrid& grid) {
  double s = 0.0;
  for (double v : phi) s += v;
  return theta1 * s * grid.cell_volume();
}

double boundary_inflow_rate(const MacroGrid& grid) {
  double rate = 0.0;
  for (const auto& f : grid.stencil().boundary_faces()) {
    const FaceCondition& c = grid.face(f.outer_face);
    if (c.kind == FaceKind::inflow) rate += c.value * grid.cell_volume() / grid.h()[f.axis];
  }
  return rate;
}

std::pair<std::vector<double>, double> zero_mass_shift(std::span<const double> phi) {
  if (phi.empty()) throw ParameterError("zero mass shift: empty field");
  double s = 0.0;
  for (double v : phi) s += v;
  const double mean = s / static_cast<double>(phi.size());
  std::vector<double> v(phi.begin(), phi.end());
  for (double& x : v) x -= mean;
  return {v, mean};
}

}  // namespace chp
