#include "chp/micro_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chp/errors.hpp"

namespace chp {
namespace {

int tile_count(double eps) {
  if (!(eps > 0.0) || !(eps <= 0.5)) throw GeometryError("perforated domain: eps must lie in (0, 1/2]");
  const double k = 1.0 / eps;
  const int K = static_cast<int>(std::lround(k));
  if (std::abs(k - K) > 1e-9 * k) throw GeometryError("perforated domain: 1/eps must be an integer");
  return K;
}

int per_cell_count(const ReferenceCell& cell, int K, int fine_per_unit) {
  if (fine_per_unit == 0) return cell.n();
  if (fine_per_unit < 0 || fine_per_unit % K != 0) {
    std::ostringstream os;
    os << "perforated domain: " << fine_per_unit << " grid cells per unit length do not split into 1/eps = " << K
       << " cells";
    throw GeometryError(os.str());
  }
  const int pc = fine_per_unit / K;
  if (pc % cell.n() != 0) {
    std::ostringstream os;
    os << "perforated domain: " << pc << " grid cells per eps-cell is not a multiple of the reference resolution "
       << cell.n();
    throw GeometryError(os.str());
  }
  return pc;
}

std::array<int, 3> cell_counts(int dim, int K, const std::array<double, 3>& L) {
  std::array<int, 3> c{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    const double x = L[a] * K;
    c[a] = static_cast<int>(std::lround(x));
    if (c[a] < 1 || std::abs(x - c[a]) > 1e-9 * x)
      throw GeometryError("perforated domain: length along axis " + std::to_string(a) +
                          " is not a multiple of eps");
  }
  return c;
}

std::array<bool, 3> periodic_of(int dim, const std::array<FaceCondition, 6>& outer) {
  std::array<bool, 3> p{false, false, false};
  for (int a = 0; a < dim; ++a) {
    const bool lo = outer[2 * a].kind == FaceKind::periodic;
    if (lo != (outer[2 * a + 1].kind == FaceKind::periodic))
      throw ParameterError("perforated domain: periodic faces must come in pairs");
    p[a] = lo;
  }
  return p;
}

}  // namespace

PerforatedGrid::PerforatedGrid(const ReferenceCell& cell, double eps, std::array<double, 3> lengths,
                               std::array<FaceCondition, 6> outer, int fine_per_unit)
    : dim_(cell.dim()),
      eps_(eps),
      K_(tile_count(eps)),
      n_ref_(cell.n()),
      refine_(per_cell_count(cell, K_, fine_per_unit) / cell.n()),
      per_cell_(per_cell_count(cell, K_, fine_per_unit)),
      cells_(cell_counts(cell.dim(), K_, lengths)),
      lengths_(lengths),
      outer_(outer),
      grid_(make_grid(cell)) {
  for (int a = dim_; a < 3; ++a) {
    lengths_[a] = 1.0;
    outer_[2 * a] = outer_[2 * a + 1] = FaceCondition{};
  }
  const std::int32_t np = grid_.active_size();
  cell_of_.resize(np);
  ref_of_.resize(np);
  const StencilGrid& rg = cell.grid();
  for (std::int32_t p = 0; p < np; ++p) {
    const auto c = grid_.coords_of_full(grid_.full_index(p));
    std::int32_t ci = 0, stride = 1;
    std::array<int, 3> rc{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
      ci += stride * (c[a] / per_cell_);
      stride *= cells_[a];
      rc[a] = (c[a] % per_cell_) / refine_;
    }
    cell_of_[p] = ci;
    ref_of_[p] = rg.active_index(rg.full_of_coords(rc));
  }

  // connectivity of the tiled pore phase
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(np), 0);
  std::vector<std::int32_t> stack{0};
  seen[0] = 1;
  std::int64_t reached = 1;
  while (!stack.empty()) {
    const std::int32_t p = stack.back();
    stack.pop_back();
    for (int a = 0; a < dim_; ++a)
      for (int up = 0; up < 2; ++up) {
        const std::int32_t q = grid_.neighbor(p, a, up);
        if (q >= 0 && !seen[q]) {
          seen[q] = 1;
          ++reached;
          stack.push_back(q);
        }
      }
  }
  if (reached != np) throw GeometryError("perforated domain: tiled pore phase is not connected");
}

StencilGrid PerforatedGrid::make_grid(const ReferenceCell& cell) const {
  std::array<int, 3> N{1, 1, 1};
  std::array<double, 3> h{1.0, 1.0, 1.0};
  for (int a = 0; a < dim_; ++a) {
    N[a] = cells_[a] * per_cell_;
    h[a] = eps_ / per_cell_;
  }
  const std::int64_t total = static_cast<std::int64_t>(N[0]) * N[1] * N[2];
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(total));
  std::vector<std::int16_t> cls(static_cast<std::size_t>(total));
  const StencilGrid& rg = cell.grid();
  std::int64_t f = 0;
  for (int k = 0; k < N[2]; ++k)
    for (int j = 0; j < N[1]; ++j)
      for (int i = 0; i < N[0]; ++i, ++f) {
        const int c[3] = {i, j, k};
        std::array<int, 3> rc{0, 0, 0};
        for (int a = 0; a < dim_; ++a) rc[a] = (c[a] % per_cell_) / refine_;
        const std::int64_t rf = rg.full_of_coords(rc);
        mask[f] = cell.pore_mask()[rf];
        cls[f] = cell.wall_class_map()[rf];
      }
  return StencilGrid(dim_, N, h, periodic_of(dim_, outer_), std::move(mask), std::move(cls));
}

std::int64_t PerforatedGrid::num_cells() const {
  return static_cast<std::int64_t>(cells_[0]) * cells_[1] * cells_[2];
}

double PerforatedGrid::porosity() const {
  return static_cast<double>(grid_.active_size()) / static_cast<double>(grid_.full_size());
}

std::array<double, 3> PerforatedGrid::center(std::int32_t p) const {
  const auto c = grid_.coords_of_full(grid_.full_index(p));
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = (c[a] + 0.5) * grid_.h()[a];
  return x;
}

MacroGrid PerforatedGrid::coarse() const { return MacroGrid(dim_, lengths_, cells_, outer_); }

PerforatedGrid build_perforated_domain(const ReferenceCell& cell, double eps, std::array<double, 3> lengths,
                                       std::array<FaceCondition, 6> outer, int fine_per_unit) {
  return PerforatedGrid(cell, eps, lengths, outer, fine_per_unit);
}

FaceData micro_face_data(const PerforatedGrid& grid, const MicroWetting& wetting) {
  if (!(wetting.cahn > 0.0)) throw ParameterError("micro wetting: Cahn number must be positive");
  const StencilGrid& g = grid.grid();
  FaceData fd = FaceData::closed(g);
  const auto& bf = g.boundary_faces();
  const double scale = -grid.eps() * wetting.gamma / wetting.cahn;
  for (std::size_t i = 0; i < bf.size(); ++i) {
    const auto& f = bf[i];
    if (f.outer_face >= 0) {
      const FaceCondition& c = grid.outer()[f.outer_face];
      if (c.kind == FaceKind::wall) {
        fd.dphi_dn[i] = c.value;
        fd.prescribed[i] = 0;
      } else if (c.kind == FaceKind::inflow) {
        fd.flux[i] = c.value;
      }
      continue;
    }
    if (wetting.a.empty()) continue;
    if (f.wall_class > static_cast<int>(wetting.a.size()))
      throw ParameterError("micro wetting: no coefficient for wall class " + std::to_string(f.wall_class));
    const double s = scale * wetting.a[f.wall_class - 1];
    if (s != 0.0) {
      fd.dphi_dn[i] = s;
      fd.prescribed[i] = 0;
    }
  }
  return fd;
}

double micro_dt_cap(const PerforatedGrid& grid, double lambda, double m) {
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  const double h = grid.grid().h()[0];
  const double d = grid.dim();
  return std::pow(h, 4) / (8.0 * d * d * lambda * lambda * m);
}

MicroStepper::MicroStepper(const PerforatedGrid& grid, const BulkFreeEnergy& energy, double lambda, double m,
                           const MicroWetting& wetting, double dt, Exec exec)
    : grid_(grid),
      energy_(energy),
      lambda_(lambda),
      m_(m),
      dt_(dt),
      exec_(exec),
      faces_(micro_face_data(grid, wetting)) {
  if (lambda < 0.0) throw ParameterError("step_micro: lambda must be non-negative");
  if (!(m > 0.0)) throw ParameterError("step_micro: mobility must be positive");
  if (!(dt > 0.0)) throw ParameterError("step_micro: dt must be positive");
  const double cap = micro_dt_cap(grid, lambda, m);
  if (dt > cap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step_micro: dt = " << dt << " exceeds the stability cap " << cap;
    throw ParameterError(os.str());
  }
  const std::size_t n = static_cast<std::size_t>(grid.grid().active_size());
  lap_.resize(n);
  mu_.resize(n);
  rhs_.resize(n);
}

void MicroStepper::step(MicroState& s) {
  kernels::ch_rhs(exec_, grid_.grid(), faces_, energy_, lambda_, m_, s.phi, lap_, mu_, rhs_);
  kernels::axpy(exec_, dt_, rhs_, s.phi);
  if (!std::isfinite(kernels::sum(exec_, s.phi))) {
    for (std::size_t i = 0; i < s.phi.size(); ++i)
      if (!std::isfinite(s.phi[i])) {
        const auto x = grid_.center(static_cast<std::int32_t>(i));
        std::ostringstream os;
        os << "step_micro: non-finite value at fine cell " << i << ", x = (" << x[0] << ", " << x[1] << ", " << x[2]
           << "), step " << s.step + 1;
        throw NumericsError(os.str());
      }
  }
  s.w.resize(lap_.size());
  for (std::size_t i = 0; i < lap_.size(); ++i) s.w[i] = -lap_[i];
  s.t += dt_;
  ++s.step;
}

MicroState step_micro(const MicroState& state, const PerforatedGrid& grid, const BulkFreeEnergy& energy,
                      double lambda, double m, const MicroWetting& wetting, double dt, Exec exec) {
  MicroStepper st(grid, energy, lambda, m, wetting, dt, exec);
  MicroState next = state;
  st.step(next);
  return next;
}

std::vector<double> cell_average(std::span<const double> micro, const PerforatedGrid& grid) {
  if (static_cast<std::int32_t>(micro.size()) != grid.grid().active_size())
    throw ParameterError("cell average: field is not defined on the pore cells");
  const std::int64_t nc = grid.num_cells();
  std::vector<double> sum(static_cast<std::size_t>(nc), 0.0);
  std::vector<std::int64_t> cnt(static_cast<std::size_t>(nc), 0);
  const auto& co = grid.cell_of();
  for (std::size_t p = 0; p < micro.size(); ++p) {
    sum[co[p]] += micro[p];
    ++cnt[co[p]];
  }
  for (std::int64_t c = 0; c < nc; ++c) sum[c] /= static_cast<double>(cnt[c]);
  return sum;
}

double interpolate(std::span<const double> u, const MacroGrid& macro, const std::array<double, 3>& x) {
  const int d = macro.dim();
  int i0[3] = {0, 0, 0};
  double t[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) {
    const int n = macro.sizes()[a];
    if (n == 1) continue;
    const double xi = x[a] / macro.h()[a] - 0.5;
    i0[a] = std::clamp(static_cast<int>(std::floor(xi)), 0, n - 2);
    t[a] = xi - i0[a];
  }
  double v = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      const int bit = (corner >> a) & 1;
      if (macro.sizes()[a] == 1) {
        if (bit) w = 0.0;
        continue;
      }
      c[a] = i0[a] + bit;
      w *= bit ? t[a] : 1.0 - t[a];
    }
    if (w != 0.0) v += w * u[macro.stencil().full_of_coords(c)];
  }
  return v;
}

namespace {

std::vector<double> centred_gradient(std::span<const double> u, const MacroGrid& g, int axis) {
  const StencilGrid& s = g.stencil();
  std::vector<double> out(u.size(), 0.0);
  const int n = g.sizes()[axis];
  if (n == 1) return out;
  const double h = g.h()[axis];
  for (std::int64_t i = 0; i < s.full_size(); ++i) {
    auto c = s.coords_of_full(i);
    auto lo = c, hi = c;
    double span = 2.0 * h;
    if (g.periodic(axis)) {
      lo[axis] = (c[axis] + n - 1) % n;
      hi[axis] = (c[axis] + 1) % n;
    } else {
      lo[axis] = std::max(c[axis] - 1, 0);
      hi[axis] = std::min(c[axis] + 1, n - 1);
      span = (hi[axis] - lo[axis]) * h;
    }
    out[i] = (u[s.full_of_coords(hi)] - u[s.full_of_coords(lo)]) / span;
  }
  return out;
}

}  // namespace

std::vector<double> reconstruct_first_order(std::span<const double> phi0, const MacroGrid& macro,
                                            const CorrectorV& xv, const PerforatedGrid& grid) {
  if (static_cast<std::int64_t>(phi0.size()) != macro.size())
    throw ParameterError("reconstruction: macro field size mismatch");
  const int d = grid.dim();
  if (macro.dim() != d || static_cast<int>(xv.xi.size()) != d)
    throw ParameterError("reconstruction: dimension mismatch");
  for (int a = 0; a < d; ++a)
    if (std::abs(macro.lengths()[a] - grid.lengths()[a]) > 1e-12)
      throw GeometryError("reconstruction: macro and micro domains differ");
  std::vector<std::vector<double>> grad;
  for (int k = 0; k < d; ++k) grad.push_back(centred_gradient(phi0, macro, k));
  const std::int32_t np = grid.grid().active_size();
  std::vector<double> out(static_cast<std::size_t>(np));
  const auto& ref = grid.reference_of();
  for (std::int32_t p = 0; p < np; ++p) {
    const auto x = grid.center(p);
    double v = interpolate(phi0, macro, x);
    double phi1 = 0.0;
    for (int k = 0; k < d; ++k) phi1 -= xv.xi[k][ref[p]] * interpolate(grad[k], macro, x);
    out[p] = v + grid.eps() * phi1;
  }
  return out;
}

std::vector<double> local_equilibrium_diagnostic(std::span<const double> phi, const PerforatedGrid& grid,
                                                 const BulkFreeEnergy& energy, double lambda,
                                                 const MicroWetting& wetting) {
  if (lambda < 0.0) throw ParameterError("local equilibrium: lambda must be non-negative");
  const StencilGrid& g = grid.grid();
  const std::size_t n = phi.size();
  if (static_cast<std::int32_t>(n) != g.active_size())
    throw ParameterError("local equilibrium: field is not defined on the pore cells");
  std::vector<double> lap(n);
  kernels::serial::laplacian(g, phi, lap);
  const FaceData fd = micro_face_data(grid, wetting);
  const auto& bf = g.boundary_faces();
  for (std::size_t i = 0; i < bf.size(); ++i)
    if (fd.dphi_dn[i] != 0.0) lap[bf[i].cell] += fd.dphi_dn[i] / g.h()[bf[i].axis];
  std::vector<double> mu(n);
  for (std::size_t p = 0; p < n; ++p) mu[p] = energy.f(phi[p]) - lambda * lambda * lap[p];

  const std::vector<double> mean = cell_average(mu, grid);
  std::vector<double> var(mean.size(), 0.0);
  std::vector<std::int64_t> cnt(mean.size(), 0);
  const auto& co = grid.cell_of();
  for (std::size_t p = 0; p < n; ++p) {
    const double e = mu[p] - mean[co[p]];
    var[co[p]] += e * e;
    ++cnt[co[p]];
  }
  for (std::size_t c = 0; c < var.size(); ++c) var[c] = std::sqrt(var[c] / static_cast<double>(cnt[c]));
  return var;
}

std::vector<double> restrict_to_cells(std::span<const double> macro_field, const MacroGrid& macro,
                                      const PerforatedGrid& grid) {
  const int d = grid.dim();
  if (macro.dim() != d) throw GeometryError("restriction: dimension mismatch");
  if (static_cast<std::int64_t>(macro_field.size()) != macro.size())
    throw ParameterError("restriction: macro field size mismatch");
  std::array<int, 3> ratio{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    if (std::abs(macro.lengths()[a] - grid.lengths()[a]) > 1e-12)
      throw GeometryError("restriction: macro and micro domains differ");
    if (macro.sizes()[a] % grid.cells()[a] != 0)
      throw GeometryError("restriction: macro grid is not a refinement of the eps-cells");
    ratio[a] = macro.sizes()[a] / grid.cells()[a];
  }
  std::vector<double> out(static_cast<std::size_t>(grid.num_cells()), 0.0);
  const StencilGrid& s = macro.stencil();
  for (std::int64_t i = 0; i < s.full_size(); ++i) {
    const auto c = s.coords_of_full(i);
    std::int64_t ci = 0, stride = 1;
    for (int a = 0; a < d; ++a) {
      ci += stride * (c[a] / ratio[a]);
      stride *= grid.cells()[a];
    }
    out[ci] += macro_field[i];
  }
  const double block = static_cast<double>(ratio[0]) * ratio[1] * ratio[2];
  for (double& v : out) v /= block;
  return out;
}

std::vector<ErrorRow> compare_micro_macro(const std::vector<Snapshot>& micro, const std::vector<Snapshot>& macro,
                                          const PerforatedGrid& grid, const MacroGrid& macro_grid) {
  std::vector<ErrorRow> rows;
  double vol = 1.0;
  for (int a = 0; a < grid.dim(); ++a) vol *= grid.eps();
  for (const Snapshot& ms : micro) {
    const Snapshot* match = nullptr;
    for (const Snapshot& M : macro)
      if (std::abs(M.t - ms.t) <= 1e-9 * std::max(1.0, std::abs(ms.t))) {
        match = &M;
        break;
      }
    if (!match) {
      std::ostringstream os;
      os << "compare: no macro snapshot at micro time t = " << ms.t;
      throw InterpolationError(os.str());
    }
    const auto a = cell_average(ms.field, grid);
    const auto b = restrict_to_cells(match->field, macro_grid, grid);
    ErrorRow r;
    r.t = ms.t;
    double s2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double e = std::abs(a[i] - b[i]);
      s2 += e * e;
      r.max = std::max(r.max, e);
    }
    r.l2 = std::sqrt(s2 * vol);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace chp
