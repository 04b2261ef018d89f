#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "chp/cg.hpp"
#include "chp/kernels.hpp"

using namespace chp;

namespace {

// Periodic box with a solid ball, so the masked neighbour table is exercised.
StencilGrid ball_grid(int n) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * n * n, 1);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) / n - 0.5, y = (j + 0.5) / n - 0.5, z = (k + 0.5) / n - 0.5;
        if (x * x + y * y + z * z < 0.09) mask[(static_cast<std::size_t>(k) * n + j) * n + i] = 0;
      }
  const double h = 1.0 / n;
  return StencilGrid(3, {n, n, n}, {h, h, h}, {true, true, true}, mask);
}

std::vector<double> noise(std::size_t size, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(size);
  for (auto& x : v) x = u(rng);
  return v;
}

template <Exec X>
void BM_laplacian(benchmark::State& st) {
  const auto g = ball_grid(static_cast<int>(st.range(0)));
  const auto u = noise(g.active_size(), 1);
  std::vector<double> out(u.size());
  for (auto _ : st) {
    kernels::laplacian(X, g, u, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * g.active_size());
}

template <Exec X>
void BM_ch_rhs(benchmark::State& st) {
  const auto g = ball_grid(static_cast<int>(st.range(0)));
  const auto phi = noise(g.active_size(), 2);
  const auto faces = FaceData::closed(g);
  const auto e = BulkFreeEnergy::standard();
  std::vector<double> lap(phi.size()), mu(phi.size()), out(phi.size());
  for (auto _ : st) {
    kernels::ch_rhs(X, g, faces, e, 0.05, 1.0, phi, lap, mu, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * g.active_size());
}

template <Exec X>
void BM_cg(benchmark::State& st) {
  const auto g = ball_grid(static_cast<int>(st.range(0)));
  auto b = noise(g.active_size(), 3);
  project_zero_mean(b, X);
  std::vector<double> x(b.size());
  for (auto _ : st) {
    std::fill(x.begin(), x.end(), 0.0);
    const auto r = solve_singular_poisson(g, b, x, 1e-8, 10000, X);
    benchmark::DoNotOptimize(r.iterations);
  }
}

}  // namespace

BENCHMARK(BM_laplacian<Exec::serial>)->Arg(32)->Arg(64);
BENCHMARK(BM_laplacian<Exec::omp>)->Arg(32)->Arg(64);
BENCHMARK(BM_ch_rhs<Exec::serial>)->Arg(32)->Arg(64);
BENCHMARK(BM_ch_rhs<Exec::omp>)->Arg(32)->Arg(64);
BENCHMARK(BM_cg<Exec::serial>)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cg<Exec::omp>)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
