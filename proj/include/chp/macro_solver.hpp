#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "chp/cell_solver.hpp"
#include "chp/free_energy.hpp"
#include "chp/kernels.hpp"
#include "chp/macro_grid.hpp"

namespace chp {

struct MacroState {
  std::vector<double> phi;
  std::vector<double> w;  // splitting variable, -div(D grad phi)/theta1 after the last step
  double t = 0.0;
  std::int64_t step = 0;
};

enum class Scheme { explicit_euler, semi_implicit };

struct StepperConfig {
  double dt = 1e-4;
  Scheme scheme = Scheme::semi_implicit;
  /// S in the linear stabilisation S m Lap (phi^{n+1} - phi^n). Energy stability
  /// of the homogeneous scheme needs S >= max f' / 2 over the visited range.
  double stabilization = 2.0;
  double lambda = 0.05;
  double mobility = 1.0;
  double tol = 1e-10;
  Exec exec = Exec::omp;
};

/// Volumetric wetting term g~0 entering the fourth-order flux as
/// psi = div(D grad phi) + sign * g~0. An empty field means g~0 = 0.
struct WallForcing {
  std::vector<double> g_tilde;
  double sign = -1.0;
};

/// (1/theta1) times the upscaled right-hand side
///   div([theta1 f'(phi) m I - (2 f(phi)/phi - f'(phi)) Mv] grad phi) - f'(phi) div(Mv grad phi)
///   - (lambda^2/theta1) div(Mw(r(phi)) grad psi),   psi = div(D grad phi) + sign g~0.
/// Face coefficients: f' by the divided difference of f, f/phi and r by the
/// average of the two cell values. Throws NumericsError naming the first
/// non-finite cell.
std::vector<double> macro_rhs(const MacroGrid& grid, std::span<const double> phi, const EffectiveTensors& tensors,
                              const BulkFreeEnergy& energy, const WallForcing& forcing = {},
                              std::vector<double>* psi_out = nullptr);

/// Largest explicit step: h^4 / (8 d^2 lambda^2 m_eff) with the finest spacing.
double explicit_dt_cap(const MacroGrid& grid, double lambda, double m_eff);

/// One step of the upscaled equation. The semi-implicit scheme solves
///   (I - dt P - dt S m Lap) (phi^{n+1} - phi^n) = dt R(phi^n)
/// with P = -(lambda^2/theta1^2) LapM LapD, LapK = sum_a K_aa d_aa, frozen
/// diagonal coefficients Mw(mean r) and D. Throws ParameterError if lambda or m
/// disagree with the tensors or the explicit cap is violated.
MacroState step_macro(const MacroGrid& grid, const MacroState& state, const EffectiveTensors& tensors,
                      const BulkFreeEnergy& energy, const StepperConfig& cfg, const WallForcing& forcing = {});

/// One step of the homogeneous Cahn-Hilliard equation phi_t = div(m grad(f(phi) - lambda^2 Lap phi))
/// with the same scheme (D = I, Mv = 0, Mw = m I, theta1 = 1).
MacroState step_homogeneous(const MacroGrid& grid, const MacroState& state, const BulkFreeEnergy& energy,
                            const StepperConfig& cfg);

/// Homogeneous right-hand side from the shared kernel.
std::vector<double> homogeneous_rhs(const MacroGrid& grid, std::span<const double> phi, const BulkFreeEnergy& energy,
                                    double lambda, double m, Exec exec = Exec::omp);

/// E = sum_cells F(phi) h^d + (lambda^2/2) sum_interior_faces |phi_q - phi_p|^2 / h_a^2 * h^d.
double energy_total(std::span<const double> phi, const BulkFreeEnergy& energy, double lambda, const MacroGrid& grid);

/// theta1 * sum phi h^d.
double mass_total(std::span<const double> phi, double theta1, const MacroGrid& grid);

/// Inflow through the boundary per unit time, n.(m grad mu) integrated over inflow faces.
double boundary_inflow_rate(const MacroGrid& grid);

/// v = phi - mean(phi) and the mean.
std::pair<std::vector<double>, double> zero_mass_shift(std::span<const double> phi);

}  // namespace chp
