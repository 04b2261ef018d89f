#include "chp/free_energy.hpp"

#include <cmath>

#include "chp/errors.hpp"
#include "chp/macro_grid.hpp"

namespace chp {

BulkFreeEnergy BulkFreeEnergy::from_coefficients(double a0, double a1, double a2, double a3,
                                                 double delta_reg) {
  if (!(delta_reg > 0.0)) throw ParameterError("free energy: regularisation floor must be positive");
  BulkFreeEnergy e;
  e.a_[0] = a0;
  e.a_[1] = a1;
  e.a_[2] = a2;
  e.a_[3] = a3;
  e.delta_reg_ = delta_reg;
  return e;
}

BulkFreeEnergy BulkFreeEnergy::double_well(double alpha1, double alpha2, double delta_reg) {
  if (!(alpha2 > alpha1)) throw ParameterError("double well: need alpha1 < alpha2");
  // (s^2 - p s + q)^2 with p = alpha1 + alpha2, q = alpha1 alpha2
  const double p = alpha1 + alpha2;
  const double q = alpha1 * alpha2;
  BulkFreeEnergy e = from_coefficients(-2.0 * p * q, 2.0 * (p * p + 2.0 * q), -6.0 * p, 4.0, delta_reg);
  e.F0_ = q * q;
  e.wells_ = std::make_pair(alpha1, alpha2);
  return e;
}

double BulkFreeEnergy::f_over_s(double s) const {
  double poly = (a_[3] * s + a_[2]) * s + a_[1];
  if (a_[0] != 0.0) {
    double d = s;
    if (std::abs(d) < delta_reg_) d = std::copysign(delta_reg_, s == 0.0 ? 1.0 : s);
    poly += a_[0] / d;
  }
  return poly;
}

BulkFreeEnergy::RValue BulkFreeEnergy::r(double s) const {
  double den = f_prime(s) * s;
  bool clamped = false;
  if (std::abs(den) < delta_reg_) {
    den = std::copysign(delta_reg_, den == 0.0 ? 1.0 : den);
    clamped = true;
  }
  return {f(s) / den, clamped};
}

bool check_assumption_F(double alpha1, double alpha2) {
  if (!(alpha1 > 0.0)) throw ParameterError("Assumption F: alpha1 must be positive");
  if (!(alpha2 > alpha1)) throw ParameterError("Assumption F: alpha2 must exceed alpha1");
  const double sum = alpha1 + alpha2;
  const double lhs = 25.0 * sum * sum - 20.0 * (alpha1 * alpha1 + alpha2 * alpha2 + 3.0 * alpha1 * alpha2);
  const double rhs = sum * sum / 4.0;
  return lhs > rhs;
}

std::vector<double> chemical_potential(const BulkFreeEnergy& e, std::span<const double> phi,
                                       double lambda, const MacroGrid& grid) {
  if (lambda < 0.0) throw ParameterError("chemical potential: lambda must be non-negative");
  std::vector<double> mu = grid.laplacian(phi, GhostRule::kPhi);
  const double l2 = lambda * lambda;
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = e.f(phi[i]) - l2 * mu[i];
  return mu;
}

}  // namespace chp
