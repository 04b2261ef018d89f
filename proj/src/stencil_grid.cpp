#include "chp/stencil_grid.hpp"

#include "chp/errors.hpp"

namespace chp {

StencilGrid::StencilGrid(int dim, std::array<int, 3> n, std::array<double, 3> h,
                         std::array<bool, 3> periodic, std::vector<std::uint8_t> active,
                         std::vector<std::int16_t> solid_class)
    : dim_(dim), n_(n), h_(h), periodic_(periodic) {
  if (dim < 1 || dim > 3) throw ParameterError("StencilGrid: dimension must be 1, 2 or 3");
  for (int a = dim; a < 3; ++a) {
    n_[a] = 1;
    h_[a] = 1.0;
    periodic_[a] = false;
  }
  full_size_ = 1;
  for (int a = 0; a < dim_; ++a) {
    if (n_[a] < 1 || !(h_[a] > 0.0)) throw ParameterError("StencilGrid: sizes and spacings must be positive");
    full_size_ *= n_[a];
    inv_h2_[a] = 1.0 / (h_[a] * h_[a]);
  }
  if (active.empty()) active.assign(static_cast<std::size_t>(full_size_), 1);
  if (static_cast<std::int64_t>(active.size()) != full_size_)
    throw ParameterError("StencilGrid: mask size does not match the grid");
  if (!solid_class.empty() && static_cast<std::int64_t>(solid_class.size()) != full_size_)
    throw ParameterError("StencilGrid: wall-class map size does not match the grid");

  active_of_full_.assign(static_cast<std::size_t>(full_size_), -1);
  for (std::int64_t f = 0; f < full_size_; ++f) {
    if (active[f]) {
      active_of_full_[f] = static_cast<std::int32_t>(full_of_active_.size());
      full_of_active_.push_back(f);
    }
  }

  const std::size_t stride = 2 * static_cast<std::size_t>(dim_);
  nbr_.assign(full_of_active_.size() * stride, -1);
  for (std::int32_t p = 0; p < active_size(); ++p) {
    const auto c = coords_of_full(full_of_active_[p]);
    for (int a = 0; a < dim_; ++a) {
      for (int up = 0; up < 2; ++up) {
        auto q = c;
        q[a] += up ? 1 : -1;
        const std::int8_t side = up ? 1 : -1;
        if (q[a] < 0 || q[a] >= n_[a]) {
          if (periodic_[a]) {
            q[a] = (q[a] + n_[a]) % n_[a];
          } else {
            faces_.push_back({p, static_cast<std::int8_t>(a), side,
                              static_cast<std::int8_t>(2 * a + up), 0});
            continue;
          }
        }
        const std::int64_t fq = full_of_coords(q);
        const std::int32_t aq = active_of_full_[fq];
        if (aq >= 0) {
          nbr_[p * stride + 2 * a + up] = aq;
        } else {
          std::int16_t cls = solid_class.empty() ? std::int16_t{1} : solid_class[fq];
          if (cls < 1) cls = 1;
          faces_.push_back({p, static_cast<std::int8_t>(a), side, -1, cls});
        }
      }
    }
  }
}

double StencilGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= h_[a];
  return v;
}

std::array<int, 3> StencilGrid::coords_of_full(std::int64_t full) const {
  std::array<int, 3> c{0, 0, 0};
  c[0] = static_cast<int>(full % n_[0]);
  full /= n_[0];
  c[1] = static_cast<int>(full % n_[1]);
  c[2] = static_cast<int>(full / n_[1]);
  return c;
}

std::int64_t StencilGrid::full_of_coords(const std::array<int, 3>& c) const {
  return c[0] + static_cast<std::int64_t>(n_[0]) * (c[1] + static_cast<std::int64_t>(n_[1]) * c[2]);
}

}  // namespace chp
