#include "chp/kernels.hpp"

namespace chp {

FaceData FaceData::closed(const StencilGrid& g) {
  const std::size_t nf = g.boundary_faces().size();
  return FaceData{std::vector<double>(nf, 0.0), std::vector<double>(nf, 0.0),
                  std::vector<std::uint8_t>(nf, 1)};
}

namespace kernels {
namespace {

// Boundary-face corrections are applied serially in both families: several
// faces can share a cell and the face lists are short compared to the volume.
void add_slope_terms(const StencilGrid& g, const FaceData& faces, std::span<double> lap) {
  const auto& bf = g.boundary_faces();
  for (std::size_t i = 0; i < bf.size(); ++i) {
    const double s = faces.dphi_dn[i];
    if (s != 0.0) lap[bf[i].cell] += s / g.h()[bf[i].axis];
  }
}

void add_flux_terms(const StencilGrid& g, const FaceData& faces, const BulkFreeEnergy& e, double m,
                    std::span<const double> phi, std::span<double> out) {
  const auto& bf = g.boundary_faces();
  for (std::size_t i = 0; i < bf.size(); ++i) {
    const auto& f = bf[i];
    const double h = g.h()[f.axis];
    if (faces.prescribed[i]) {
      if (faces.flux[i] != 0.0) out[f.cell] += faces.flux[i] / h;
    } else if (faces.dphi_dn[i] != 0.0) {
      // ghost mu differs from mu only through f(phi_ghost); Lap phi is mirrored
      const double pc = phi[f.cell];
      const double pg = pc + h * faces.dphi_dn[i];
      out[f.cell] += m * (e.f(pg) - e.f(pc)) / (h * h);
    }
  }
}

}  // namespace

namespace serial {

void laplacian(const StencilGrid& g, std::span<const double> u, std::span<double> out) {
  const int d = g.dim();
  const std::size_t stride = 2 * static_cast<std::size_t>(d);
  const auto& nbr = g.neighbor_table();
  const auto& w = g.inv_h2();
  const std::int32_t np = g.active_size();
  for (std::int32_t p = 0; p < np; ++p) {
    const std::int32_t* nb = nbr.data() + p * stride;
    const double up = u[p];
    double acc = 0.0;
    for (int a = 0; a < d; ++a) {
      double s = 0.0;
      if (nb[2 * a] >= 0) s += u[nb[2 * a]] - up;
      if (nb[2 * a + 1] >= 0) s += u[nb[2 * a + 1]] - up;
      acc += w[a] * s;
    }
    out[p] = acc;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + b * y[i];
}

void ch_rhs(const StencilGrid& g, const FaceData& faces, const BulkFreeEnergy& e, double lambda,
            double m, std::span<const double> phi, std::span<double> lap, std::span<double> mu,
            std::span<double> out) {
  laplacian(g, phi, lap);
  add_slope_terms(g, faces, lap);
  const double l2 = lambda * lambda;
  for (std::size_t p = 0; p < phi.size(); ++p) mu[p] = e.f(phi[p]) - l2 * lap[p];
  laplacian(g, mu, out);
  for (std::size_t p = 0; p < phi.size(); ++p) out[p] *= m;
  add_flux_terms(g, faces, e, m, phi, out);
}

}  // namespace serial

namespace omp {

void laplacian(const StencilGrid& g, std::span<const double> u, std::span<double> out) {
  const int d = g.dim();
  const std::size_t stride = 2 * static_cast<std::size_t>(d);
  const std::int32_t* nbr = g.neighbor_table().data();
  const auto w = g.inv_h2();
  const std::int32_t np = g.active_size();
  const double* uu = u.data();
  double* oo = out.data();
#pragma omp parallel for schedule(static)
  for (std::int32_t p = 0; p < np; ++p) {
    const std::int32_t* nb = nbr + p * stride;
    const double up = uu[p];
    double acc = 0.0;
    for (int a = 0; a < d; ++a) {
      double s = 0.0;
      if (nb[2 * a] >= 0) s += uu[nb[2 * a]] - up;
      if (nb[2 * a + 1] >= 0) s += uu[nb[2 * a + 1]] - up;
      acc += w[a] * s;
    }
    oo[p] = acc;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (std::int64_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum(std::span<const double> x) {
  double s = 0.0;
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (std::int64_t i = 0; i < n; ++i) s += x[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void ch_rhs(const StencilGrid& g, const FaceData& faces, const BulkFreeEnergy& e, double lambda,
            double m, std::span<const double> phi, std::span<double> lap, std::span<double> mu,
            std::span<double> out) {
  laplacian(g, phi, lap);
  add_slope_terms(g, faces, lap);
  const double l2 = lambda * lambda;
  const std::int64_t n = static_cast<std::int64_t>(phi.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < n; ++p) mu[p] = e.f(phi[p]) - l2 * lap[p];
  laplacian(g, mu, out);
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < n; ++p) out[p] *= m;
  add_flux_terms(g, faces, e, m, phi, out);
}

}  // namespace omp

void laplacian(Exec x, const StencilGrid& g, std::span<const double> u, std::span<double> out) {
  x == Exec::omp ? omp::laplacian(g, u, out) : serial::laplacian(g, u, out);
}
double dot(Exec x, std::span<const double> a, std::span<const double> b) {
  return x == Exec::omp ? omp::dot(a, b) : serial::dot(a, b);
}
double sum(Exec x, std::span<const double> a) { return x == Exec::omp ? omp::sum(a) : serial::sum(a); }
void axpy(Exec x, double a, std::span<const double> v, std::span<double> y) {
  x == Exec::omp ? omp::axpy(a, v, y) : serial::axpy(a, v, y);
}
void xpby(Exec x, std::span<const double> v, double b, std::span<double> y) {
  x == Exec::omp ? omp::xpby(v, b, y) : serial::xpby(v, b, y);
}
void ch_rhs(Exec x, const StencilGrid& g, const FaceData& faces, const BulkFreeEnergy& e,
            double lambda, double m, std::span<const double> phi, std::span<double> lap,
            std::span<double> mu, std::span<double> out) {
  x == Exec::omp ? omp::ch_rhs(g, faces, e, lambda, m, phi, lap, mu, out)
                 : serial::ch_rhs(g, faces, e, lambda, m, phi, lap, mu, out);
}

}  // namespace kernels
}  // namespace chp
