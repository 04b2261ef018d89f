#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace chp {

/// A face of an active cell that has no active neighbour across it.
struct BoundaryFace {
  std::int32_t cell = 0;       // active index of the owning cell
  std::int8_t axis = 0;
  std::int8_t side = 1;        // +1: outward normal points along +axis, -1: along -axis
  std::int8_t outer_face = -1; // 2*axis + (side > 0) on the domain boundary, -1 on a pore-solid face
  std::int16_t wall_class = 0; // class of the adjacent solid cell; 0 on the domain boundary
};

/// Cell-centred uniform grid restricted to an "active" mask (the pore phase),
/// with face-adjacency tables. Fields on a StencilGrid are stored compactly
/// over active cells only, ordered by increasing full index (x fastest).
class StencilGrid {
 public:
  StencilGrid(int dim, std::array<int, 3> n, std::array<double, 3> h, std::array<bool, 3> periodic,
              std::vector<std::uint8_t> active = {}, std::vector<std::int16_t> solid_class = {});

  int dim() const { return dim_; }
  const std::array<int, 3>& n() const { return n_; }
  const std::array<double, 3>& h() const { return h_; }
  const std::array<double, 3>& inv_h2() const { return inv_h2_; }
  bool periodic(int axis) const { return periodic_[axis]; }
  double cell_volume() const;

  std::int64_t full_size() const { return full_size_; }
  std::int32_t active_size() const { return static_cast<std::int32_t>(full_of_active_.size()); }

  /// Neighbour table with stride 2*dim: entry [p*2*dim + 2*axis + (upper ? 1 : 0)]
  /// holds the active index of the neighbour or -1 across a boundary face.
  const std::vector<std::int32_t>& neighbor_table() const { return nbr_; }
  std::int32_t neighbor(std::int32_t p, int axis, int upper) const {
    return nbr_[static_cast<std::size_t>(p) * 2 * dim_ + 2 * axis + upper];
  }

  std::int64_t full_index(std::int32_t p) const { return full_of_active_[p]; }
  /// -1 for inactive cells.
  std::int32_t active_index(std::int64_t full) const { return active_of_full_[full]; }
  std::array<int, 3> coords_of_full(std::int64_t full) const;
  std::int64_t full_of_coords(const std::array<int, 3>& c) const;

  const std::vector<BoundaryFace>& boundary_faces() const { return faces_; }

 private:
  int dim_;
  std::array<int, 3> n_;
  std::array<double, 3> h_;
  std::array<double, 3> inv_h2_{};
  std::array<bool, 3> periodic_;
  std::int64_t full_size_ = 0;
  std::vector<std::int64_t> full_of_active_;
  std::vector<std::int32_t> active_of_full_;
  std::vector<std::int32_t> nbr_;
  std::vector<BoundaryFace> faces_;
};

}  // namespace chp
