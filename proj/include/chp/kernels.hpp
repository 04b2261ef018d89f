#pragma once

// Data-parallel stencil and vector kernels on compact StencilGrid fields.
//
// Every kernel has a plain serial reference in kernels::serial and an OpenMP
// version in kernels::omp with the same signature. At one thread the two give
// bit-identical results; the serial versions are kept for tests and benchmarks.

#include <cstdint>
#include <span>
#include <vector>

#include "chp/free_energy.hpp"
#include "chp/stencil_grid.hpp"

namespace chp {

/// Boundary-face data for phase-field stepping, indexed like grid.boundary_faces().
struct FaceData {
  std::vector<double> dphi_dn;           // outward normal derivative imposed on phi via the ghost cell
  std::vector<double> flux;              // n.(m grad mu): inflow rate per unit area, used where prescribed == 1
  std::vector<std::uint8_t> prescribed;  // 1: flux given, 0: flux from ghost values

  static FaceData closed(const StencilGrid& g);  // zero slope, zero flux on every face
};

/// Which kernel family a solver should call.
enum class Exec { serial, omp };

namespace kernels {

namespace serial {
/// out = L u with zero-flux mirror ghosts at every boundary face.
void laplacian(const StencilGrid& g, std::span<const double> u, std::span<double> out);
double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
/// y += a x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = x + b y
void xpby(std::span<const double> x, double b, std::span<double> y);
/// Cahn-Hilliard right-hand side div(m grad(f(phi) - lambda^2 Lap phi)) with the
/// boundary treatment in `faces`. `lap` and `mu` receive Lap phi and mu.
void ch_rhs(const StencilGrid& g, const FaceData& faces, const BulkFreeEnergy& e, double lambda,
            double m, std::span<const double> phi, std::span<double> lap, std::span<double> mu,
            std::span<double> out);
}  // namespace serial

namespace omp {
void laplacian(const StencilGrid& g, std::span<const double> u, std::span<double> out);
double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double b, std::span<double> y);
void ch_rhs(const StencilGrid& g, const FaceData& faces, const BulkFreeEnergy& e, double lambda,
            double m, std::span<const double> phi, std::span<double> lap, std::span<double> mu,
            std::span<double> out);
}  // namespace omp

// Policy dispatch used by the solvers.
void laplacian(Exec x, const StencilGrid& g, std::span<const double> u, std::span<double> out);
double dot(Exec x, std::span<const double> a, std::span<const double> b);
double sum(Exec x, std::span<const double> a);
void axpy(Exec x, double a, std::span<const double> v, std::span<double> y);
void xpby(Exec x, std::span<const double> v, double b, std::span<double> y);
void ch_rhs(Exec x, const StencilGrid& g, const FaceData& faces, const BulkFreeEnergy& e,
            double lambda, double m, std::span<const double> phi, std::span<double> lap,
            std::span<double> mu, std::span<double> out);

}  // namespace kernels
}  // namespace chp
