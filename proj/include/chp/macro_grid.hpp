#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "chp/kernels.hpp"
#include "chp/stencil_grid.hpp"

namespace chp {

enum class FaceKind {
  periodic,  // both faces of the axis must be periodic
  no_flux,   // grad_n phi = 0, zero normal flux
  inflow,    // grad_n phi = 0, normal flux n.(m grad mu) = value entering the domain
  wall,      // grad_n phi = value (wetting datum g), grad_n Lap phi = 0
};

struct FaceCondition {
  FaceKind kind = FaceKind::no_flux;
  double value = 0.0;
};

/// Ghost-cell rule for padded fields.
enum class GhostRule {
  kPhi,     // order parameter: mirror plus h * g on wall faces
  kMirror,  // plain mirror (zero normal derivative) on every non-periodic face
};

class SeparableBasis;

/// Uniform cell-centred grid on [0,L0] x [0,L1] x [0,L2]. Faces are numbered
/// 2*axis + (upper ? 1 : 0). Fields are stored x fastest.
class MacroGrid {
 public:
  MacroGrid(int dim, std::array<double, 3> lengths, std::array<int, 3> sizes,
            std::array<FaceCondition, 6> faces = {});

  int dim() const { return dim_; }
  const std::array<double, 3>& lengths() const { return lengths_; }
  const std::array<int, 3>& sizes() const { return sizes_; }
  const std::array<double, 3>& h() const { return h_; }
  std::int64_t size() const { return stencil_.full_size(); }
  double cell_volume() const { return stencil_.cell_volume(); }
  double domain_volume() const;
  const FaceCondition& face(int f) const { return faces_[f]; }
  const std::array<FaceCondition, 6>& faces() const { return faces_; }
  bool periodic(int axis) const { return faces_[2 * axis].kind == FaceKind::periodic; }
  std::array<double, 3> center(std::int64_t idx) const;

  /// Full-mask stencil grid over the same cells.
  const StencilGrid& stencil() const { return stencil_; }
  /// Boundary data for the Cahn-Hilliard kernel on stencil().
  FaceData face_data() const;

  /// Padded copy with one ghost layer per side (sizes n_a + 2).
  std::vector<double> padded(std::span<const double> u, GhostRule rule) const;
  std::array<std::int64_t, 3> padded_strides() const;
  std::int64_t padded_index(const std::array<int, 3>& c) const;  // c in interior coordinates

  /// Second-order Laplacian with the given ghost rule.
  std::vector<double> laplacian(std::span<const double> u, GhostRule rule) const;

  /// Per-axis eigenbasis of the 1D ghost-rule Laplacian, built on first use.
  const SeparableBasis& basis() const;

 private:
  int dim_;
  std::array<double, 3> lengths_;
  std::array<int, 3> sizes_;
  std::array<double, 3> h_;
  std::array<FaceCondition, 6> faces_;
  StencilGrid stencil_;
  struct BasisCache {
    std::once_flag once;
    std::unique_ptr<const SeparableBasis> basis;
  };
  std::shared_ptr<BasisCache> cache_;  // shared by copies of the same grid
};

/// Diagonalisation of the mirror / periodic Laplacian as a sum of 1D operators:
/// L = sum_a I x .. x T_a x .. x I with T_a = Q_a diag(kappa_a) Q_a^T.
class SeparableBasis {
 public:
  explicit SeparableBasis(const MacroGrid& g);

  const std::vector<double>& eigenvalues(int axis) const { return kappa_[axis]; }
  /// Coefficients in the eigenbasis (in place).
  void forward(std::span<double> u) const;
  void inverse(std::span<double> u) const;

  /// Solve sum over modes: symbol(kappa) * uhat = rhs_hat; `symbol` is evaluated per
  /// mode as a function of (kappa_0, kappa_1, kappa_2).
  template <class Symbol>
  void solve(std::span<double> u, Symbol&& symbol) const {
    forward(u);
    const auto& n = sizes_;
    std::int64_t idx = 0;
    for (int k = 0; k < n[2]; ++k)
      for (int j = 0; j < n[1]; ++j)
        for (int i = 0; i < n[0]; ++i, ++idx)
          u[idx] /= symbol(kappa_[0][i], dim_ > 1 ? kappa_[1][j] : 0.0, dim_ > 2 ? kappa_[2][k] : 0.0);
    inverse(u);
  }

 private:
  void apply(std::span<double> u, bool transpose) const;
  int dim_;
  std::array<int, 3> sizes_;
  std::array<std::vector<double>, 3> kappa_;
  std::array<std::vector<double>, 3> q_;  // column-major n x n
};

}  // namespace chp
