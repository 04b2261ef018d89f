#include <cmath>
#include <random>

#include "chp/cell_geometry.hpp"
#include "chp/cell_solver.hpp"
#include "chp/errors.hpp"
#include "chp/macro_solver.hpp"
#include "chp/micro_solver.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chp;

namespace {

ReferenceCell ball_cell(int n, double r = 0.3) {
  CellGeometrySpec s;
  s.n = n;
  s.inclusion = BallInclusion{{0.5, 0.5, 0.5}, r};
  return build_cell(s);
}

ReferenceCell empty_cell(int n) {
  CellGeometrySpec s;
  s.n = n;
  return build_cell(s);
}

// Number of 4-connected solid components of a full-grid mask (1 = pore), non-periodic.
int solid_components(const StencilGrid& g) {
  const int nx = g.n()[0], ny = g.n()[1];
  std::vector<int> seen(static_cast<std::size_t>(nx) * ny, 0);
  int count = 0;
  for (int s = 0; s < nx * ny; ++s) {
    if (g.active_index(s) >= 0 || seen[s]) continue;
    ++count;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int i = c % nx, j = c / nx;
      const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int q = 0; q < 4; ++q) {
        const int a = i + di[q], b = j + dj[q];
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const int t = b * nx + a;
        if (g.active_index(t) < 0 && !seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("tiling the reference cell") {
  SUBCASE("cell without inclusion") {
    const auto p = build_perforated_domain(empty_cell(8), 0.25, {1.0, 1.0, 1.0});
    CHECK(p.K() == 4);
    CHECK(p.grid().active_size() == 32 * 32);
    CHECK(p.porosity() == 1.0);
    CHECK(p.num_cells() == 16);
  }
  SUBCASE("ball cell gives one inclusion per eps-cell") {
    const auto c = ball_cell(16);
    const auto p = build_perforated_domain(c, 0.25, {1.0, 1.0, 1.0});
    CHECK(solid_components(p.grid()) == 16);
    CHECK(p.porosity() == c.porosity());
    const auto q = build_perforated_domain(c, 0.25, {1.0, 1.0, 1.0}, {}, 128);
    CHECK(q.refine() == 2);
    CHECK(q.porosity() == c.porosity());
  }
  SUBCASE("tilings that do not fit") {
    const auto c = ball_cell(16);
    CHECK_THROWS_AS(build_perforated_domain(c, 0.3, {1.0, 1.0, 1.0}), GeometryError);
    CHECK_THROWS_AS(build_perforated_domain(c, 1.0 / 3.0, {1.0, 1.0, 1.0}, {}, 64), GeometryError);
    CHECK_THROWS_AS(build_perforated_domain(c, 0.25, {1.1, 1.0, 1.0}), GeometryError);
  }
}

TEST_CASE("micro stepping") {
  const auto e = BulkFreeEnergy::standard();
  SUBCASE("constant states are fixed points") {
    const auto p = build_perforated_domain(ball_cell(16), 0.5, {1.0, 1.0, 1.0});
    for (double c : {-1.0, 0.2, 1.0}) {
      MicroState s{std::vector<double>(p.grid().active_size(), c), {}, 0.0, 0};
      const auto n = step_micro(s, p, e, 0.05, 1.0, {}, 1e-8);
      CHECK(n.phi == s.phi);
    }
  }
  SUBCASE("a trivial tiling matches the homogeneous explicit step") {
    const auto p = build_perforated_domain(empty_cell(8), 0.25, {1.0, 1.0, 1.0});
    const MacroGrid g(2, {1.0, 1.0, 1.0}, {32, 32, 1});
    const double dt = micro_dt_cap(p, 0.05, 1.0);
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.lambda = 0.05;
    cfg.scheme = Scheme::explicit_euler;
    MicroState s{oracle::uniform(1024, -0.5, 0.5, 2), {}, 0.0, 0};
    MacroState h{s.phi, {}, 0.0, 0};
    for (int k = 0; k < 20; ++k) {
      s = step_micro(s, p, e, 0.05, 1.0, {}, dt);
      h = step_homogeneous(g, h, e, cfg);
    }
    CHECK(oracle::max_abs_diff(s.phi, h.phi) <= 1e-12);
    CHECK_THROWS_AS(step_micro(s, p, e, 0.05, 1.0, {}, 2 * dt), ParameterError);
  }
  SUBCASE("mass is conserved without wetting data") {
    const auto p = build_perforated_domain(ball_cell(16), 0.25, {1.0, 1.0, 1.0});
    const double dt = micro_dt_cap(p, 0.05, 1.0);
    MicroState s{oracle::uniform(p.grid().active_size(), -0.5, 0.5, 5), {}, 0.0, 0};
    double m0 = 0.0;
    for (double v : s.phi) m0 += v;
    MicroStepper st(p, e, 0.05, 1.0, {}, dt);
    for (int k = 0; k < 50; ++k) st.step(s);
    double m1 = 0.0;
    for (double v : s.phi) m1 += v;
    CHECK(std::abs(m1 - m0) <= 1e-10 * std::abs(m0));
    CHECK(s.step == 50);
  }
  SUBCASE("with a wall slope and mirrored Lap phi, the wall flux is m (f(phi_ghost) - f(phi)) / h") {
    const auto p = build_perforated_domain(ball_cell(16), 0.25, {1.0, 1.0, 1.0});
    const double dt = micro_dt_cap(p, 0.05, 1.0);
    const MicroWetting w{0.4, 0.05, {0.3}};
    const double g = -0.25 * 0.4 / 0.05 * 0.3, h = p.grid().h()[0];
    MicroState s{oracle::uniform(p.grid().active_size(), -0.5, 0.5, 5), {}, 0.0, 0};
    double expected = 0.0;
    for (const auto& f : p.grid().boundary_faces())
      if (f.outer_face < 0) expected += dt * (e.f(s.phi[f.cell] + h * g) - e.f(s.phi[f.cell])) / (h * h);
    double m0 = 0.0, m1 = 0.0;
    for (double v : s.phi) m0 += v;
    s = step_micro(s, p, e, 0.05, 1.0, w, dt);
    for (double v : s.phi) m1 += v;
    CHECK(m1 - m0 == doctest::Approx(expected).epsilon(1e-9));
  }
  SUBCASE("the pore-solid slope scales with eps") {
    const auto c = ball_cell(16);
    const MicroWetting w{0.5, 0.1, {0.2}};
    for (double eps : {0.5, 0.25}) {
      const auto p = build_perforated_domain(c, eps, {1.0, 1.0, 1.0});
      const auto fd = micro_face_data(p, w);
      const auto& bf = p.grid().boundary_faces();
      for (std::size_t i = 0; i < bf.size(); ++i)
        if (bf[i].outer_face < 0) CHECK(fd.dphi_dn[i] == doctest::Approx(-eps * 0.5 / 0.1 * 0.2).epsilon(1e-15));
    }
    CHECK_THROWS_AS(micro_face_data(build_perforated_domain(c, 0.5, {1.0, 1.0, 1.0}), MicroWetting{0.5, 0.0, {0.2}}),
                    ParameterError);
  }
}

TEST_CASE("cell averages") {
  const auto p = build_perforated_domain(empty_cell(8), 0.25, {1.0, 1.0, 1.0});
  const std::int32_t n = p.grid().active_size();
  SUBCASE("constant") {
    const auto a = cell_average(std::vector<double>(n, 0.7), p);
    REQUIRE(a.size() == 16);
    for (double v : a) CHECK(v == doctest::Approx(0.7).epsilon(1e-15));
  }
  SUBCASE("linear field averages to the cell centre") {
    std::vector<double> u(n);
    for (std::int32_t q = 0; q < n; ++q) u[q] = p.center(q)[0];
    const auto a = cell_average(u, p);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) CHECK(a[j * 4 + i] == doctest::Approx(0.25 * (i + 0.5)).epsilon(1e-14));
  }
  SUBCASE("checkerboard averages to zero") {
    std::vector<double> u(n);
    for (std::int32_t q = 0; q < n; ++q) {
      const auto c = p.grid().coords_of_full(p.grid().full_index(q));
      u[q] = (c[0] + c[1]) % 2 ? 1.0 : -1.0;
    }
    for (double v : cell_average(u, p)) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(cell_average(std::vector<double>(3, 0.0), p), ParameterError);
}

TEST_CASE("first-order reconstruction") {
  const MacroGrid macro(2, {1.0, 1.0, 1.0}, {16, 16, 1});
  SUBCASE("constant macro data") {
    const auto c = ball_cell(16);
    const auto p = build_perforated_domain(c, 0.25, {1.0, 1.0, 1.0});
    const auto xv = solve_corrector_v(c);
    const auto r = reconstruct_first_order(std::vector<double>(macro.size(), -0.4), macro, xv, p);
    for (double v : r) CHECK(v == doctest::Approx(-0.4).epsilon(1e-14));
  }
  SUBCASE("trivial cell reduces to interpolation") {
    const auto c = empty_cell(8);
    const auto p = build_perforated_domain(c, 0.25, {1.0, 1.0, 1.0});
    const auto xv = solve_corrector_v(c);
    const auto phi0 = oracle::uniform(macro.size(), -1, 1, 14);
    const auto r = reconstruct_first_order(phi0, macro, xv, p);
    for (std::int32_t q = 0; q < p.grid().active_size(); q += 37)
      CHECK(r[q] == doctest::Approx(interpolate(phi0, macro, p.center(q))).epsilon(1e-14));
  }
  SUBCASE("linear macro data against the corrector formula") {
    const auto c = ball_cell(16);
    const auto p = build_perforated_domain(c, 0.25, {1.0, 1.0, 1.0});
    const auto xv = solve_corrector_v(c, 1e-12);
    std::vector<double> phi0(macro.size());
    for (std::int64_t i = 0; i < macro.size(); ++i) {
      const auto x = macro.center(i);
      phi0[i] = 2.0 * x[0] - 0.5 * x[1];
    }
    const auto r = reconstruct_first_order(phi0, macro, xv, p);
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<std::int32_t> pick(0, p.grid().active_size() - 1);
    for (int trial = 0; trial < 10; ++trial) {
      const std::int32_t q = pick(rng);
      const auto x = p.center(q);
      const std::int32_t y = p.reference_of()[q];
      const double ref = 2.0 * x[0] - 0.5 * x[1] - 0.25 * (2.0 * xv.xi[0][y] - 0.5 * xv.xi[1][y]);
      CHECK(r[q] == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("local equilibrium diagnostic") {
  const auto p = build_perforated_domain(ball_cell(16), 0.25, {1.0, 1.0, 1.0});
  const auto e = BulkFreeEnergy::standard();
  const auto d = local_equilibrium_diagnostic(std::vector<double>(p.grid().active_size(), 0.3), p, e, 0.05);
  REQUIRE(d.size() == 16);
  CHECK(oracle::max_abs(d) <= 1e-15);
  const auto r = local_equilibrium_diagnostic(oracle::uniform(p.grid().active_size(), -1, 1, 1), p, e, 0.05);
  for (double v : r) CHECK(v > 0.0);
}

TEST_CASE("micro-macro comparison") {
  const auto p = build_perforated_domain(empty_cell(8), 0.25, {1.0, 1.0, 1.0});
  const MacroGrid coarse = p.coarse();
  const auto cells = oracle::uniform(16, -1, 1, 31);
  std::vector<double> micro(p.grid().active_size());
  for (std::int32_t q = 0; q < p.grid().active_size(); ++q) micro[q] = cells[p.cell_of()[q]];
  const std::vector<Snapshot> ms{{0.0, micro}, {0.5, micro}};
  const std::vector<Snapshot> Ms{{0.0, cells}, {0.25, cells}, {0.5, cells}};
  const auto rows = compare_micro_macro(ms, Ms, p, coarse);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.l2 <= 4e-15);
    CHECK(r.max <= 4e-15);
  }
  CHECK(rows[1].t == 0.5);

  // a constant offset c gives l2 = c |Omega|^(1/2) and max = c
  auto shifted = cells;
  for (double& v : shifted) v += 0.1;
  const auto off = compare_micro_macro({{0.0, micro}}, {{0.0, shifted}}, p, coarse);
  CHECK(off[0].l2 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(off[0].max == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(compare_micro_macro({{0.3, micro}}, Ms, p, coarse), InterpolationError);
  const MacroGrid other(2, {2.0, 1.0, 1.0}, {4, 4, 1});
  CHECK_THROWS_AS(compare_micro_macro(ms, Ms, p, other), GeometryError);
}
