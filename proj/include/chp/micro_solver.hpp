#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "chp/cell_geometry.hpp"
#include "chp/cell_solver.hpp"
#include "chp/free_energy.hpp"
#include "chp/kernels.hpp"
#include "chp/macro_grid.hpp"

namespace chp {

/// Omega^eps: the K^d-fold tiling of a reference cell over [0,L0] x [0,1]^{d-1}, eps = 1/K.
class PerforatedGrid {
 public:
  /// `fine_per_unit` is the global grid count per unit length; 0 selects n/eps.
  /// Each eps-cell must hold an integer multiple of the reference resolution n.
  /// Throws GeometryError when the tiling does not fit or the pore phase is disconnected.
  PerforatedGrid(const ReferenceCell& cell, double eps, std::array<double, 3> lengths,
                 std::array<FaceCondition, 6> outer = {}, int fine_per_unit = 0);

  int dim() const { return dim_; }
  double eps() const { return eps_; }
  int K() const { return K_; }
  int refine() const { return refine_; }  // fine cells per reference pixel and axis
  int per_cell() const { return per_cell_; }  // fine cells per eps-cell and axis
  const std::array<int, 3>& cells() const { return cells_; }  // eps-cells per axis
  std::int64_t num_cells() const;
  const std::array<double, 3>& lengths() const { return lengths_; }
  const StencilGrid& grid() const { return grid_; }
  const std::array<FaceCondition, 6>& outer() const { return outer_; }
  double porosity() const;
  /// eps-cell index (x fastest) of each active fine cell.
  const std::vector<std::int32_t>& cell_of() const { return cell_of_; }
  /// Pore index in the reference cell grid of each active fine cell.
  const std::vector<std::int32_t>& reference_of() const { return ref_of_; }
  /// Centre of the active fine cell p.
  std::array<double, 3> center(std::int32_t p) const;
  /// Macro grid whose cells are the eps-cells.
  MacroGrid coarse() const;

 private:
  StencilGrid make_grid(const ReferenceCell& cell) const;
  int dim_;
  double eps_;
  int K_;
  int n_ref_;
  int refine_;
  int per_cell_;
  std::array<int, 3> cells_;
  std::array<double, 3> lengths_;
  std::array<FaceCondition, 6> outer_;
  StencilGrid grid_;
  std::vector<std::int32_t> cell_of_;
  std::vector<std::int32_t> ref_of_;
};

PerforatedGrid build_perforated_domain(const ReferenceCell& cell, double eps, std::array<double, 3> lengths,
                                       std::array<FaceCondition, 6> outer = {}, int fine_per_unit = 0);

struct MicroState {
  std::vector<double> phi;
  std::vector<double> w;  // -Lap phi after the last step
  double t = 0.0;
  std::int64_t step = 0;
};

/// Wetting coefficients a_i per wall class; the pore-solid slope of class i is
/// grad_n phi = -eps (gamma / C_h) a_i.
struct MicroWetting {
  double gamma = 0.0;
  double cahn = 1.0;
  std::vector<double> a;
};

/// Boundary data on every boundary face of grid.grid(): eps-scaled wetting
/// slopes on pore-solid faces, the outer face conditions elsewhere.
FaceData micro_face_data(const PerforatedGrid& grid, const MicroWetting& wetting);

/// Forward-Euler step of the perforated Cahn-Hilliard problem with the shared
/// kernel. Throws ParameterError above the explicit cap, NumericsError on NaN.
MicroState step_micro(const MicroState& state, const PerforatedGrid& grid, const BulkFreeEnergy& energy,
                      double lambda, double m, const MicroWetting& wetting, double dt, Exec exec = Exec::omp);

/// Reusable stepper holding the boundary data and work buffers.
class MicroStepper {
 public:
  MicroStepper(const PerforatedGrid& grid, const BulkFreeEnergy& energy, double lambda, double m,
               const MicroWetting& wetting, double dt, Exec exec = Exec::omp);
  void step(MicroState& state);

 private:
  const PerforatedGrid& grid_;
  BulkFreeEnergy energy_;
  double lambda_;
  double m_;
  double dt_;
  Exec exec_;
  FaceData faces_;
  std::vector<double> lap_, mu_, rhs_;
};

/// h^4 / (8 d^2 lambda^2 m) on the fine grid.
double micro_dt_cap(const PerforatedGrid& grid, double lambda, double m);

/// Mean over the pore part of each eps-cell.
std::vector<double> cell_average(std::span<const double> micro, const PerforatedGrid& grid);

/// Sample a macro field at the fine pore cells: phi0 + eps phi1 with
/// phi1 = -sum_k xi_v^k(y) d phi0 / d x_k. phi0 and its centred-difference
/// gradient are interpolated multilinearly (linear extrapolation at the edges).
std::vector<double> reconstruct_first_order(std::span<const double> phi0, const MacroGrid& macro,
                                            const CorrectorV& xv, const PerforatedGrid& grid);

/// Multilinear interpolation of a cell-centred macro field at x.
double interpolate(std::span<const double> u, const MacroGrid& macro, const std::array<double, 3>& x);

/// Population standard deviation of mu = f(phi) - lambda^2 Lap phi over the pore
/// part of each eps-cell.
std::vector<double> local_equilibrium_diagnostic(std::span<const double> phi, const PerforatedGrid& grid,
                                                 const BulkFreeEnergy& energy, double lambda,
                                                 const MicroWetting& wetting = {});

struct Snapshot {
  double t = 0.0;
  std::vector<double> field;
};

struct ErrorRow {
  double t = 0.0;
  double l2 = 0.0;   // (sum over eps-cells of err^2 eps-cell volume)^(1/2)
  double max = 0.0;
};

/// Block-average the macro field onto the eps-cells.
std::vector<double> restrict_to_cells(std::span<const double> macro_field, const MacroGrid& macro,
                                      const PerforatedGrid& grid);

/// Errors of cell_average(micro) against the restricted macro field at every
/// micro snapshot time. Throws InterpolationError when a micro time has no macro
/// snapshot within 1e-9 relative, GeometryError for incompatible grids.
std::vector<ErrorRow> compare_micro_macro(const std::vector<Snapshot>& micro, const std::vector<Snapshot>& macro,
                                          const PerforatedGrid& grid, const MacroGrid& macro_grid);

}  // namespace chp
