#include "chp/macro_grid.hpp"

#include <Eigen/Dense>

#include "chp/errors.hpp"

namespace chp {
namespace {

std::array<bool, 3> periodic_flags(int dim, const std::array<FaceCondition, 6>& faces) {
  std::array<bool, 3> p{false, false, false};
  for (int a = 0; a < dim; ++a) {
    const bool lo = faces[2 * a].kind == FaceKind::periodic;
    const bool hi = faces[2 * a + 1].kind == FaceKind::periodic;
    if (lo != hi) throw ParameterError("macro grid: periodic faces must come in pairs (axis " + std::to_string(a) + ")");
    p[a] = lo;
  }
  return p;
}

std::array<double, 3> spacing(int dim, const std::array<double, 3>& L, const std::array<int, 3>& n) {
  std::array<double, 3> h{1.0, 1.0, 1.0};
  for (int a = 0; a < dim; ++a) {
    if (!(L[a] > 0.0) || n[a] < 1) throw ParameterError("macro grid: lengths and sizes must be positive");
    h[a] = L[a] / n[a];
  }
  return h;
}

}  // namespace

MacroGrid::MacroGrid(int dim, std::array<double, 3> lengths, std::array<int, 3> sizes,
                     std::array<FaceCondition, 6> faces)
    : dim_(dim),
      lengths_(lengths),
      sizes_(sizes),
      h_(spacing(dim, lengths, sizes)),
      faces_(faces),
      stencil_(dim, sizes, h_, periodic_flags(dim, faces)),
      cache_(std::make_shared<BasisCache>()) {
  for (int a = dim_; a < 3; ++a) {
    sizes_[a] = 1;
    lengths_[a] = 1.0;
    faces_[2 * a] = faces_[2 * a + 1] = FaceCondition{};
  }
}

double MacroGrid::domain_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= lengths_[a];
  return v;
}

std::array<double, 3> MacroGrid::center(std::int64_t idx) const {
  const auto c = stencil_.coords_of_full(idx);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = (c[a] + 0.5) * h_[a];
  return x;
}

FaceData MacroGrid::face_data() const {
  FaceData fd = FaceData::closed(stencil_);
  const auto& bf = stencil_.boundary_faces();
  for (std::size_t i = 0; i < bf.size(); ++i) {
    const FaceCondition& c = faces_[bf[i].outer_face];
    switch (c.kind) {
      case FaceKind::wall:
        fd.dphi_dn[i] = c.value;
        fd.prescribed[i] = 0;
        break;
      case FaceKind::inflow:
        fd.flux[i] = c.value;
        break;
      default:
        break;
    }
  }
  return fd;
}

std::array<std::int64_t, 3> MacroGrid::padded_strides() const {
  std::array<std::int64_t, 3> s{1, 0, 0};
  s[1] = dim_ > 1 ? sizes_[0] + 2 : 0;
  s[2] = dim_ > 2 ? static_cast<std::int64_t>(sizes_[0] + 2) * (sizes_[1] + 2) : 0;
  return s;
}

std::int64_t MacroGrid::padded_index(const std::array<int, 3>& c) const {
  const auto s = padded_strides();
  std::int64_t idx = c[0] + 1;
  if (dim_ > 1) idx += s[1] * (c[1] + 1);
  if (dim_ > 2) idx += s[2] * (c[2] + 1);
  return idx;
}

std::vector<double> MacroGrid::padded(std::span<const double> u, GhostRule rule) const {
  if (static_cast<std::int64_t>(u.size()) != size()) throw ParameterError("macro grid: field size mismatch");
  std::int64_t total = 1;
  for (int a = 0; a < dim_; ++a) total *= sizes_[a] + 2;
  std::vector<double> pad(static_cast<std::size_t>(total), 0.0);
  const auto s = padded_strides();
  const int nx = sizes_[0], ny = sizes_[1], nz = sizes_[2];
  std::int64_t idx = 0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i, ++idx) pad[padded_index({i, j, k})] = u[idx];

  // axis by axis over the full padded range of the other axes, so edge and
  // corner ghosts are filled as well
  for (int a = 0; a < dim_; ++a) {
    const int n = sizes_[a];
    const std::int64_t sa = s[a];
    std::array<int, 3> lim{1, 1, 1};
    for (int b = 0; b < dim_; ++b) lim[b] = b == a ? 1 : sizes_[b] + 2;
    for (int k = 0; k < lim[2]; ++k)
      for (int j = 0; j < lim[1]; ++j)
        for (int i = 0; i < lim[0]; ++i) {
          std::array<int, 3> c{i, j, k};
          c[a] = 1;
          const std::int64_t first = c[0] + s[1] * c[1] + s[2] * c[2];
          const std::int64_t last = first + sa * (n - 1);
          for (int up = 0; up < 2; ++up) {
            const FaceCondition& fc = faces_[2 * a + up];
            const std::int64_t b = up ? last : first;
            const std::int64_t g = up ? last + sa : first - sa;
            if (fc.kind == FaceKind::periodic) {
              pad[g] = up ? pad[first] : pad[last];
            } else if (rule == GhostRule::kPhi && fc.kind == FaceKind::wall) {
              pad[g] = pad[b] + h_[a] * fc.value;
            } else {
              pad[g] = pad[b];
            }
          }
        }
  }
  return pad;
}

std::vector<double> MacroGrid::laplacian(std::span<const double> u, GhostRule rule) const {
  const auto pad = padded(u, rule);
  const auto s = padded_strides();
  std::vector<double> out(u.size());
  const int nx = sizes_[0], ny = sizes_[1], nz = sizes_[2];
  std::int64_t idx = 0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i, ++idx) {
        const std::int64_t p = padded_index({i, j, k});
        double acc = 0.0;
        for (int a = 0; a < dim_; ++a)
          acc += (pad[p + s[a]] - 2.0 * pad[p] + pad[p - s[a]]) / (h_[a] * h_[a]);
        out[idx] = acc;
      }
  return out;
}

const SeparableBasis& MacroGrid::basis() const {
  std::call_once(cache_->once, [this] { cache_->basis = std::make_unique<const SeparableBasis>(*this); });
  return *cache_->basis;
}

SeparableBasis::SeparableBasis(const MacroGrid& g) : dim_(g.dim()), sizes_(g.sizes()) {
  for (int a = 0; a < 3; ++a) {
    const int n = a < dim_ ? sizes_[a] : 1;
    if (a >= dim_) {
      kappa_[a] = {0.0};
      q_[a] = {1.0};
      continue;
    }
    // assemble the 1D operator column by column from the production kernel
    const StencilGrid line(1, {n, 1, 1}, {g.h()[a], 1.0, 1.0}, {g.periodic(a), false, false});
    Eigen::MatrixXd t(n, n);
    std::vector<double> e(n, 0.0), col(n);
    for (int c = 0; c < n; ++c) {
      e[c] = 1.0;
      kernels::serial::laplacian(line, e, col);
      for (int r = 0; r < n; ++r) t(r, c) = col[r];
      e[c] = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (es.info() != Eigen::Success) throw ConvergenceError("separable solver: eigendecomposition failed");
    kappa_[a].assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    q_[a].assign(es.eigenvectors().data(), es.eigenvectors().data() + static_cast<std::int64_t>(n) * n);
  }
}

void SeparableBasis::apply(std::span<double> u, bool transpose) const {
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
  std::int64_t inner = 1;
  for (int a = 0; a < dim_; ++a) {
    const int n = sizes_[a];
    std::int64_t outer = 1;
    for (int b = a + 1; b < dim_; ++b) outer *= sizes_[b];
    Eigen::Map<const Mat> q(q_[a].data(), n, n);
    Mat tmp(inner, n);
    for (std::int64_t o = 0; o < outer; ++o) {
      // lines along axis a: B(i, j) = u[o * inner * n + i + inner * j]
      Eigen::Map<Mat> blk(u.data() + o * inner * n, inner, n);
      if (transpose)
        tmp.noalias() = blk * q.transpose();
      else
        tmp.noalias() = blk * q;
      blk = tmp;
    }
    inner *= n;
  }
}

void SeparableBasis::forward(std::span<double> u) const { apply(u, false); }
void SeparableBasis::inverse(std::span<double> u) const { apply(u, true); }

}  // namespace chp
