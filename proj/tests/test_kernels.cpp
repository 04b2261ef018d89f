#include <omp.h>

#include "chp/kernels.hpp"
#include "chp/stencil_grid.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chp;

namespace {

StencilGrid full_grid(int nx, int ny, bool px, bool py) {
  return StencilGrid(2, {nx, ny, 1}, {1.0 / nx, 1.0 / ny, 1.0}, {px, py, false});
}

// Full-array masked Laplacian with zero-flux faces at inactive cells and at non-periodic edges.
std::vector<double> masked_laplacian(const std::vector<double>& full, const std::vector<std::uint8_t>& mask, int n,
                                     double h) {
  std::vector<double> out(full.size(), 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!mask[j * n + i]) continue;
      double s = 0.0;
      const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int q = 0; q < 4; ++q) {
        const int a = (i + di[q] + n) % n, b = (j + dj[q] + n) % n;
        if (mask[b * n + a]) s += full[b * n + a] - full[j * n + i];
      }
      out[j * n + i] = s / (h * h);
    }
  return out;
}

}  // namespace

TEST_CASE("full-grid laplacian matches the brute-force stencil") {
  for (bool periodic : {false, true}) {
    const auto g = full_grid(12, 9, periodic, periodic);
    const auto u = oracle::uniform(static_cast<std::size_t>(g.active_size()), -1, 1, 7);
    std::vector<double> out(u.size());
    kernels::serial::laplacian(g, u, out);
    const oracle::Grid2 og{12, 9, 1.0 / 12, 1.0 / 9, periodic, periodic};
    CHECK(oracle::max_abs_diff(out, oracle::laplacian(u, og)) < 1e-9);
  }
}

TEST_CASE("masked periodic laplacian treats solid neighbours as zero-flux faces") {
  const int n = 16;
  std::vector<std::uint8_t> mask(n * n, 1);
  for (int j = 5; j < 9; ++j)
    for (int i = 3; i < 12; ++i) mask[j * n + i] = 0;
  const StencilGrid g(2, {n, n, 1}, {1.0 / n, 1.0 / n, 1.0}, {true, true, false}, mask);
  const auto full = oracle::uniform(n * n, -1, 1, 11);
  std::vector<double> compact;
  for (int f = 0; f < n * n; ++f)
    if (mask[f]) compact.push_back(full[f]);
  std::vector<double> out(compact.size());
  kernels::serial::laplacian(g, compact, out);
  const auto ref = masked_laplacian(full, mask, n, 1.0 / n);
  for (std::int32_t p = 0; p < g.active_size(); ++p) CHECK(out[p] == doctest::Approx(ref[g.full_index(p)]).epsilon(1e-12));
  // interface faces: 2 * 9 along y plus 2 * 4 along x
  CHECK(g.boundary_faces().size() == 26);
}

TEST_CASE("closed-face Cahn-Hilliard kernel matches the brute-force operator") {
  const auto g = full_grid(16, 16, false, false);
  const auto phi = oracle::uniform(256, -0.5, 0.5, 3);
  const auto e = BulkFreeEnergy::standard();
  std::vector<double> lap(256), mu(256), out(256);
  kernels::serial::ch_rhs(g, FaceData::closed(g), e, 0.05, 1.5, phi, lap, mu, out);
  const oracle::Grid2 og{16, 16, 1.0 / 16, 1.0 / 16};
  const auto ref = oracle::ch_rhs(phi, og, {0, -1, 0, 1}, 0.05, 1.5);
  CHECK(oracle::max_abs_diff(out, ref) < 1e-10 * oracle::max_abs(ref));
}

TEST_CASE("serial and OpenMP kernels agree") {
  const int n = 48;
  std::vector<std::uint8_t> mask(n * n, 1);
  for (int j = 10; j < 30; ++j)
    for (int i = 10; i < 30; ++i)
      if ((i - 20) * (i - 20) + (j - 20) * (j - 20) < 64) mask[j * n + i] = 0;
  const StencilGrid g(2, {n, n, 1}, {1.0 / n, 1.0 / n, 1.0}, {true, true, false}, mask);
  const std::size_t m = static_cast<std::size_t>(g.active_size());
  const auto u = oracle::uniform(m, -1, 1, 5);
  const auto v = oracle::uniform(m, -1, 1, 6);
  const auto e = BulkFreeEnergy::standard();
  FaceData fd = FaceData::closed(g);
  for (std::size_t i = 0; i < fd.dphi_dn.size(); ++i) fd.dphi_dn[i] = 0.1 * static_cast<double>(i % 3);

  for (int threads : {1, 4}) {
    omp_set_num_threads(threads);
    CAPTURE(threads);
    std::vector<double> a(m), b(m);
    kernels::serial::laplacian(g, u, a);
    kernels::omp::laplacian(g, u, b);
    CHECK(a == b);

    std::vector<double> l1(m), l2(m), m1(m), m2(m), r1(m), r2(m);
    kernels::serial::ch_rhs(g, fd, e, 0.03, 1.0, u, l1, m1, r1);
    kernels::omp::ch_rhs(g, fd, e, 0.03, 1.0, u, l2, m2, r2);
    CHECK(r1 == r2);
    CHECK(m1 == m2);

    auto y1 = v, y2 = v;
    kernels::serial::axpy(0.25, u, y1);
    kernels::omp::axpy(0.25, u, y2);
    CHECK(y1 == y2);
    kernels::serial::xpby(u, -0.5, y1);
    kernels::omp::xpby(u, -0.5, y2);
    CHECK(y1 == y2);

    const double ds = kernels::serial::dot(u, v), dp = kernels::omp::dot(u, v);
    const double ss = kernels::serial::sum(u), sp = kernels::omp::sum(u);
    if (threads == 1) {
      CHECK(ds == dp);
      CHECK(ss == sp);
    } else {
      CHECK(dp == doctest::Approx(ds).epsilon(1e-12));
      CHECK(sp == doctest::Approx(ss).epsilon(1e-10));
    }
  }
  omp_set_num_threads(1);
}

TEST_CASE("zero-flux laplacian annihilates constants and sums to zero") {
  const auto g = full_grid(10, 7, false, true);
  std::vector<double> c(70, 3.5), out(70);
  kernels::serial::laplacian(g, c, out);
  CHECK(oracle::max_abs(out) == 0.0);
  const auto u = oracle::uniform(70, -1, 1, 9);
  kernels::serial::laplacian(g, u, out);
  CHECK(std::abs(kernels::serial::sum(out)) < 1e-9);
}
