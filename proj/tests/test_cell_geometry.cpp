#include <cmath>
#include <numbers>
#include <sstream>

#include "chp/cell_geometry.hpp"
#include "chp/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chp;

namespace {

CellGeometrySpec ball(int n, double r = 0.3) {
  CellGeometrySpec s;
  s.dim = 2;
  s.n = n;
  s.inclusion = BallInclusion{{0.5, 0.5, 0.5}, r};
  return s;
}

CellGeometrySpec slab(int n) {
  CellGeometrySpec s;
  s.dim = 2;
  s.n = n;
  s.inclusion = BoxInclusion{{0.0, 0.5, 0.0}, {1.0, 0.8, 1.0}};
  return s;
}

// Pore-solid face count split by the x coordinate of the solid cell centre.
std::pair<int, int> ball_faces_left_right(int n, double r) {
  auto solid = [&](int i, int j) {
    i = (i + n) % n;
    j = (j + n) % n;
    const double dx = (i + 0.5) / n - 0.5, dy = (j + 0.5) / n - 0.5;
    return dx * dx + dy * dy <= r * r;
  };
  int left = 0, right = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!solid(i, j)) continue;
      const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int q = 0; q < 4; ++q)
        if (!solid(i + di[q], j + dj[q])) ((i + 0.5) / n < 0.5 ? left : right)++;
    }
  return {left, right};
}

}  // namespace

TEST_CASE("cell without inclusion is all pore") {
  CellGeometrySpec s;
  s.n = 64;
  const auto c = build_cell(s);
  CHECK(c.porosity() == 1.0);
  CHECK(porosity(c) == 1.0);
  CHECK(c.grid().boundary_faces().empty());
  CHECK(c.interface_measure() == 0.0);
  CHECK_THROWS_AS(wall_fractions(c), GeometryError);
}

TEST_CASE("ball porosity against the pixel-count oracle") {
  // pixel count at n = 256 and the Richardson estimate from n = 256, 512
  const double pixels256 = 0.717041015625;
  const double richardson = 0.717498779296875;
  CHECK(oracle::ball_porosity_pixels(256, 0.5, 0.5, 0.3) == pixels256);
  CHECK(2 * oracle::ball_porosity_pixels(512, 0.5, 0.5, 0.3) - pixels256 == richardson);

  const auto c = build_cell(ball(256));
  CHECK(c.porosity() == pixels256);
  CHECK(std::abs(c.porosity() - richardson) <= 0.01);
  CHECK(std::abs(c.porosity() - (1 - std::numbers::pi * 0.09)) <= 0.01);
}

TEST_CASE("porosity converges at first order under refinement") {
  // C = 0.2 covers n |theta(2n) - theta(n)| = 0.1875, 0.046875, 0.0625 for n = 32, 64, 128
  const double C = 0.2;
  for (int n : {32, 64, 128}) {
    const double a = build_cell(ball(n)).porosity(), b = build_cell(ball(2 * n)).porosity();
    CHECK(std::abs(b - a) <= C / n);
  }
}

TEST_CASE("slab porosity is an exact cell count") {
  const auto c = build_cell(slab(100));
  CHECK(c.porosity() == 0.7);
  CHECK(c.class_measures().size() == 1);
  CHECK(c.interface_measure() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("disconnected or empty pore phase is rejected") {
  const int n = 64;
  CellGeometrySpec s;
  s.n = n;
  BitmapInclusion bm;
  bm.pore.assign(n * n, 0);
  for (int j = 10; j < 12; ++j)
    for (int i = 0; i < n; ++i) bm.pore[j * n + i] = 1;  // channel along x
  bm.pore[40 * n + 30] = 1;                                // isolated pocket
  s.inclusion = bm;
  CHECK_THROWS_AS(build_cell(s), GeometryError);

  s.inclusion = BoxInclusion{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(build_cell(s), GeometryError);
}

TEST_CASE("invalid specs raise ParameterError") {
  CellGeometrySpec s;
  s.n = 4;
  CHECK_THROWS_AS(build_cell(s), ParameterError);
  s.n = 16;
  s.dim = 4;
  CHECK_THROWS_AS(build_cell(s), ParameterError);
}

TEST_CASE("wall fractions") {
  SUBCASE("single class") {
    const auto f = wall_fractions(build_cell(ball(64)));
    REQUIRE(f.size() == 1);
    CHECK(f[0] == 1.0);
  }
  SUBCASE("slab with top and bottom classes") {
    auto s = slab(100);
    s.wall_regions = {{1, {0.0, 0.5, 0.0}, {1.0, 0.65, 1.0}}, {2, {0.0, 0.65, 0.0}, {1.0, 0.8, 1.0}}};
    const auto f = wall_fractions(build_cell(s));
    REQUIRE(f.size() == 2);
    CHECK(f[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("ball split into left and right halves") {
    for (int n : {64, 96}) {
      auto s = ball(n);
      s.wall_regions = {{1, {0.0, 0.0, 0.0}, {0.5, 1.0, 1.0}}, {2, {0.5, 0.0, 0.0}, {1.0, 1.0, 1.0}}};
      const auto c = build_cell(s);
      const auto f = wall_fractions(c);
      const auto [left, right] = ball_faces_left_right(n, 0.3);
      REQUIRE(f.size() == 2);
      CHECK(f[0] == doctest::Approx(static_cast<double>(left) / (left + right)).epsilon(1e-14));
      CHECK(std::abs(f[0] - 0.5) <= 1.0 / n);
      CHECK(std::abs(f[1] - 0.5) <= 1.0 / n);
      CHECK(f[0] + f[1] == doctest::Approx(1.0).epsilon(1e-12));
      double total = 0.0;
      for (double m : c.class_measures()) total += m;
      CHECK(total == doctest::Approx(c.interface_measure()).epsilon(1e-14));
    }
  }
}

TEST_CASE("bitmap export and import round trip") {
  auto s = ball(32, 0.27);
  s.inclusion = BallInclusion{{0.4, 0.55, 0.5}, 0.27};
  s.wall_regions = {{2, {0.0, 0.0, 0.0}, {0.4, 1.0, 1.0}}};
  const auto c = build_cell(s);
  std::stringstream ss;
  write_cell_bitmap(ss, c);
  const auto d = read_cell_bitmap(ss);
  CHECK(d.pore_mask() == c.pore_mask());
  CHECK(d.wall_class_map() == c.wall_class_map());
  CHECK(d.porosity() == c.porosity());
  CHECK(d.class_measures() == c.class_measures());
}

TEST_CASE("three-dimensional ball cell") {
  CellGeometrySpec s;
  s.dim = 3;
  s.n = 16;
  s.inclusion = BallInclusion{{0.5, 0.5, 0.5}, 0.3};
  const auto c = build_cell(s);
  std::int64_t pore = 0;
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      for (int i = 0; i < 16; ++i) {
        const double x = (i + 0.5) / 16 - 0.5, y = (j + 0.5) / 16 - 0.5, z = (k + 0.5) / 16 - 0.5;
        if (x * x + y * y + z * z > 0.09) ++pore;
      }
  CHECK(c.porosity() == static_cast<double>(pore) / 4096.0);
}
