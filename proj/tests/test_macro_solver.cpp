#include <algorithm>
#include <cmath>
#include <numbers>

#include "chp/cell_geometry.hpp"
#include "chp/cell_solver.hpp"
#include "chp/errors.hpp"
#include "chp/macro_solver.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chp;

namespace {

std::array<FaceCondition, 6> all_periodic() {
  std::array<FaceCondition, 6> f{};
  for (auto& c : f) c = {FaceKind::periodic, 0.0};
  return f;
}

EffectiveTensors ball_tensors(double lambda, double m) {
  CellGeometrySpec s;
  s.n = 24;
  s.inclusion = BoxInclusion{{0.2, 0.3, 0.0}, {0.55, 0.8, 1.0}};
  return solve_cell(build_cell(s), lambda, m, 1e-11).tensors;
}

std::vector<double> smooth_field(const MacroGrid& g, double amp) {
  std::vector<double> phi(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) {
    const auto x = g.center(i);
    phi[i] = amp * (std::cos(std::numbers::pi * x[0] / g.lengths()[0]) +
                    0.5 * std::cos(2 * std::numbers::pi * x[1] / g.lengths()[1]));
  }
  return phi;
}

double variance(const std::vector<double>& v) {
  double m = 0.0, s = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("trivial tensors reduce the upscaled operator to Cahn-Hilliard") {
  const int nx = 16, ny = 12;
  const MacroGrid g(2, {1.0, 0.75, 1.0}, {nx, ny, 1});
  const auto phi = oracle::uniform(nx * ny, -0.8, 0.8, 21);
  const auto e = BulkFreeEnergy::standard();
  const auto t = EffectiveTensors::trivial(2, 1.4, 0.03);
  const auto out = macro_rhs(g, phi, t, e);
  const auto ref = oracle::ch_rhs(phi, oracle::Grid2{nx, ny, 1.0 / nx, 0.75 / ny}, {0, -1, 0, 1}, 0.03, 1.4);
  CHECK(oracle::max_abs_diff(out, ref) <= 1e-12 * oracle::max_abs(ref));
  CHECK(oracle::max_abs_diff(homogeneous_rhs(g, phi, e, 0.03, 1.4), ref) <= 1e-12 * oracle::max_abs(ref));
}

TEST_CASE("constant states are stationary") {
  const MacroGrid g(2, {1.0, 1.0, 1.0}, {12, 12, 1});
  const auto t = ball_tensors(0.05, 1.0);
  const auto e = BulkFreeEnergy::standard();
  for (double c : {-1.0, 0.0, 0.3, 1.0}) {
    const std::vector<double> phi(g.size(), c);
    CHECK(oracle::max_abs(macro_rhs(g, phi, t, e)) == 0.0);
  }
}

TEST_CASE("second-order part against the nonlinear-diffusion oracle") {
  const int n = 20;
  const MacroGrid g(2, {1.0, 1.0, 1.0}, {n, n, 1});
  auto t = EffectiveTensors::trivial(2, 0.8, 0.0);
  t.theta1 = 0.6;
  t.D = Tensor::identity(2, 0.45);
  t.Mw_a = Tensor::identity(2, 0.3);
  const auto e = BulkFreeEnergy::from_coefficients(0.1, 0.5, -0.2, 1.0);
  const auto phi = oracle::uniform(n * n, -1, 1, 4);
  const auto out = macro_rhs(g, phi, t, e);
  const auto ref = oracle::nonlinear_diffusion(phi, oracle::Grid2{n, n, 1.0 / n, 1.0 / n},
                                               [&](double a, double b) { return 0.8 * e.secant(a, b); });
  CHECK(oracle::max_abs_diff(out, ref) <= 1e-12 * oracle::max_abs(ref));
}

TEST_CASE("periodic grids: the operator commutes with translations") {
  const int n = 16;
  const MacroGrid g(2, {1.0, 1.0, 1.0}, {n, n, 1}, all_periodic());
  const auto t = ball_tensors(0.05, 1.0);
  const auto e = BulkFreeEnergy::standard();
  const auto phi = oracle::uniform(n * n, -0.9, 0.9, 8);
  const int sx = 5, sy = 3;
  std::vector<double> shifted(phi.size());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) shifted[((j + sy) % n) * n + (i + sx) % n] = phi[j * n + i];
  const auto a = macro_rhs(g, phi, t, e);
  const auto b = macro_rhs(g, shifted, t, e);
  double diff = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(b[((j + sy) % n) * n + (i + sx) % n] - a[j * n + i]));
  CHECK(diff <= 1e-12 * oracle::max_abs(a));
}

TEST_CASE("energy, mass and the zero-mass shift") {
  const MacroGrid g(2, {1.0, 1.0, 1.0}, {4, 4, 1});
  const auto e = BulkFreeEnergy::standard();
  SUBCASE("constant field") {
    const std::vector<double> c(16, 0.5);
    CHECK(energy_total(c, e, 0.1, g) == doctest::Approx(e.F(0.5)).epsilon(1e-15));
    CHECK(mass_total(c, 0.7, g) == doctest::Approx(0.35).epsilon(1e-15));
  }
  SUBCASE("linear ramp along x") {
    std::vector<double> phi(16);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) phi[j * 4 + i] = 0.25 * i;
    double bulk = 0.0;
    for (double v : phi) bulk += e.F(v);
    // 3 interior x-faces per row, each with jump h: |jump / h|^2 = 1
    const double ref = (bulk + 0.5 * 0.01 * 12.0) / 16.0;
    CHECK(energy_total(phi, e, 0.1, g) == doctest::Approx(ref).epsilon(1e-14));
    CHECK_THROWS_AS(energy_total(phi, e, -0.1, g), ParameterError);
  }
  SUBCASE("zero-mass shift") {
    const auto phi = oracle::uniform(16, 1.0, 2.0, 3);
    const auto [v, mean] = zero_mass_shift(phi);
    CHECK(mean >= 1.0);
    CHECK(mean <= 2.0);
    double s = 0.0;
    for (double x : v) s += x;
    CHECK(std::abs(s) <= 1e-14);
    for (std::size_t i = 0; i < phi.size(); ++i) CHECK(v[i] + mean == doctest::Approx(phi[i]).epsilon(1e-15));
    CHECK_THROWS_AS(zero_mass_shift(std::vector<double>{}), ParameterError);
  }
}

TEST_CASE("semi-implicit stepping is first order in time") {
  const MacroGrid g(2, {1.0, 1.0, 1.0}, {16, 16, 1});
  const auto e = BulkFreeEnergy::standard();
  const auto t = EffectiveTensors::trivial(2, 1.0, 0.05);
  const auto phi0 = smooth_field(g, 0.3);
  const double T = 4e-3;
  std::vector<std::vector<double>> sol;
  for (int steps : {20, 40, 80}) {
    StepperConfig cfg;
    cfg.dt = T / steps;
    cfg.lambda = 0.05;
    MacroState s{phi0, {}, 0.0, 0};
    for (int k = 0; k < steps; ++k) s = step_macro(g, s, t, e, cfg);
    CHECK(s.t == doctest::Approx(T).epsilon(1e-12));
    sol.push_back(s.phi);
  }
  const double d1 = oracle::max_abs_diff(sol[0], sol[1]), d2 = oracle::max_abs_diff(sol[1], sol[2]);
  CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("mass balance") {
  const auto e = BulkFreeEnergy::standard();
  auto t = ball_tensors(0.05, 1.0);
  t.Mv = Tensor::zero(2);  // the Mv terms are not in divergence form
  SUBCASE("closed box conserves mass") {
    const MacroGrid g(2, {1.0, 1.0, 1.0}, {16, 16, 1});
    StepperConfig cfg;
    cfg.dt = 1e-4;
    MacroState s{oracle::uniform(256, -0.5, 0.5, 12), {}, 0.0, 0};
    const double m0 = mass_total(s.phi, t.theta1, g);
    for (int k = 0; k < 50; ++k) s = step_macro(g, s, t, e, cfg);
    CHECK(std::abs(mass_total(s.phi, t.theta1, g) - m0) <= 1e-12);
  }
  SUBCASE("inflow adds mass at the prescribed rate") {
    std::array<FaceCondition, 6> f{};
    f[0] = {FaceKind::inflow, 0.2};
    const MacroGrid g(2, {1.0, 0.5, 1.0}, {16, 8, 1}, f);
    CHECK(boundary_inflow_rate(g) == doctest::Approx(0.1).epsilon(1e-14));
    StepperConfig cfg;
    cfg.dt = 1e-4;
    MacroState s{smooth_field(g, 0.2), {}, 0.0, 0};
    const double m0 = mass_total(s.phi, t.theta1, g);
    for (int k = 0; k < 50; ++k) s = step_macro(g, s, t, e, cfg);
    CHECK(mass_total(s.phi, t.theta1, g) - m0 == doctest::Approx(50 * 1e-4 * 0.1).epsilon(1e-10));
  }
}

TEST_CASE("homogeneous relaxation") {
  const auto e = BulkFreeEnergy::standard();
  SUBCASE("a 1D step relaxes its chemical potential") {
    const int n = 64;
    const MacroGrid g(1, {1.0, 1.0, 1.0}, {n, 1, 1});
    MacroState s{std::vector<double>(n), {}, 0.0, 0};
    for (int i = 0; i < n; ++i) s.phi[i] = i < n / 3 ? 0.9 : -0.9;
    StepperConfig cfg;
    cfg.dt = 1e-5;
    cfg.lambda = 0.05;
    double prev = variance(chemical_potential(e, s.phi, 0.05, g));
    for (int block = 0; block < 10; ++block) {
      for (int k = 0; k < 50; ++k) s = step_homogeneous(g, s, e, cfg);
      const double v = variance(chemical_potential(e, s.phi, 0.05, g));
      CHECK(v < prev);
      prev = v;
    }
  }
  SUBCASE("energy decreases from small random data") {
    const MacroGrid g(2, {1.0, 1.0, 1.0}, {32, 32, 1});
    MacroState s{oracle::uniform(1024, -0.1, 0.1, 99), {}, 0.0, 0};
    StepperConfig cfg;
    cfg.dt = 2e-4;
    cfg.lambda = 0.03;
    double prev = energy_total(s.phi, e, 0.03, g);
    for (int k = 0; k < 200; ++k) {
      s = step_homogeneous(g, s, e, cfg);
      const double en = energy_total(s.phi, e, 0.03, g);
      CHECK(en <= prev + 1e-14);
      prev = en;
    }
  }
}

TEST_CASE("stepper argument checks") {
  const MacroGrid g(2, {1.0, 1.0, 1.0}, {16, 16, 1});
  const auto e = BulkFreeEnergy::standard();
  const auto t = EffectiveTensors::trivial(2, 1.0, 0.05);
  MacroState s{std::vector<double>(256, 0.1), {}, 0.0, 0};
  StepperConfig cfg;
  cfg.lambda = 0.05;
  cfg.scheme = Scheme::explicit_euler;
  cfg.dt = 2.0 * explicit_dt_cap(g, 0.05, 1.0);
  CHECK_THROWS_AS(step_macro(g, s, t, e, cfg), ParameterError);
  CHECK_THROWS_AS(step_homogeneous(g, s, e, cfg), ParameterError);
  cfg.dt = explicit_dt_cap(g, 0.05, 1.0);
  CHECK_NOTHROW(step_macro(g, s, t, e, cfg));
  cfg.lambda = 0.06;
  CHECK_THROWS_AS(step_macro(g, s, t, e, cfg), ParameterError);
  cfg.lambda = 0.05;
  s.phi[37] = std::nan("");
  try {
    macro_rhs(g, s.phi, t, e);
    FAIL("expected NumericsError");
  } catch (const NumericsError& err) {
    CHECK(std::string(err.what()).find("cell (") != std::string::npos);
  }
}
