#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace chp {

class MacroGrid;

/// Cubic bulk chemical potential f(s) = a3 s^3 + a2 s^2 + a1 s + a0 and its
/// primitive F(s) = F(0) + int_0^s f. Immutable.
class BulkFreeEnergy {
 public:
  static constexpr double kDefaultRegularization = 1e-8;

  /// Plain polynomial form; F(0) = 0.
  static BulkFreeEnergy from_coefficients(double a0, double a1, double a2, double a3,
                                          double delta_reg = kDefaultRegularization);
  /// F(s) = (s - alpha1)^2 (s - alpha2)^2 expanded, so f = F' has a0 != 0 in general.
  /// Requires alpha1 < alpha2.
  static BulkFreeEnergy double_well(double alpha1, double alpha2,
                                    double delta_reg = kDefaultRegularization);
  /// f(s) = s^3 - s, F(s) = s^4/4 - s^2/2.
  static BulkFreeEnergy standard() { return from_coefficients(0.0, -1.0, 0.0, 1.0); }

  double a0() const { return a_[0]; }
  double a1() const { return a_[1]; }
  double a2() const { return a_[2]; }
  double a3() const { return a_[3]; }
  double delta_reg() const { return delta_reg_; }
  double F_offset() const { return F0_; }
  const std::optional<std::pair<double, double>>& wells() const { return wells_; }

  double f(double s) const { return ((a_[3] * s + a_[2]) * s + a_[1]) * s + a_[0]; }
  double f_prime(double s) const { return (3.0 * a_[3] * s + 2.0 * a_[2]) * s + a_[1]; }
  double f_second(double s) const { return 6.0 * a_[3] * s + 2.0 * a_[2]; }
  double F(double s) const {
    return F0_ + (((0.25 * a_[3] * s + a_[2] / 3.0) * s + 0.5 * a_[1]) * s + a_[0]) * s;
  }

  /// Divided difference (f(b) - f(a)) / (b - a), evaluated without division;
  /// equals f'(a) when a == b.
  double secant(double a, double b) const {
    return a_[3] * (a * a + a * b + b * b) + a_[2] * (a + b) + a_[1];
  }

  /// f(s)/s as the polynomial a3 s^2 + a2 s + a1 + a0/s; the a0 term uses
  /// |s| clamped below by delta_reg.
  double f_over_s(double s) const;

  struct RValue {
    double value;
    bool clamped;  // true when |f'(s) s| < delta_reg and the denominator was floored
  };
  /// r(s) = f(s) / (f'(s) s) with a sign-preserving floor on the denominator.
  RValue r(double s) const;

 private:
  BulkFreeEnergy() = default;
  double a_[4] = {0.0, 0.0, 0.0, 0.0};
  double F0_ = 0.0;
  double delta_reg_ = kDefaultRegularization;
  std::optional<std::pair<double, double>> wells_;
};

/// Double-well admissibility condition
/// 25(a1+a2)^2 - 20(a1^2+a2^2+3 a1 a2) > (a1+a2)^2/4, evaluated as written.
/// Throws ParameterError unless alpha2 > alpha1 > 0.
bool check_assumption_F(double alpha1, double alpha2);

/// mu = f(phi) - lambda^2 Lap_h phi with the grid's boundary ghosts.
std::vector<double> chemical_potential(const BulkFreeEnergy& e, std::span<const double> phi,
                                       double lambda, const MacroGrid& grid);

}  // namespace chp
