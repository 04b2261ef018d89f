#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "chp/stencil_grid.hpp"

namespace chp {

struct NoInclusion {};

struct BallInclusion {
  std::array<double, 3> center{0.5, 0.5, 0.5};
  double radius = 0.25;
};

/// Axis-aligned solid box [lo, hi]; lo = 0 and hi = 1 along an axis spans the cell.
struct BoxInclusion {
  std::array<double, 3> lo{0.25, 0.25, 0.25};
  std::array<double, 3> hi{0.75, 0.75, 0.75};
};

/// Explicit mask, x fastest; 1 = pore, 0 = solid.
struct BitmapInclusion {
  std::vector<std::uint8_t> pore;
};

using Inclusion = std::variant<NoInclusion, BallInclusion, BoxInclusion, BitmapInclusion>;

/// Solid cells whose centre lies in [lo, hi] carry wall class `label`. The first
/// matching region wins; unmatched solid cells are class 1.
struct WallRegion {
  int label = 1;
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};
};

struct CellGeometrySpec {
  int dim = 2;
  int n = 64;
  Inclusion inclusion = NoInclusion{};
  std::vector<WallRegion> wall_regions;
};

/// Discretised unit cell Y = Y1 (pore) u Y2 (solid). Immutable once built.
class ReferenceCell {
 public:
  int dim() const { return dim_; }
  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  std::int64_t num_cells() const { return static_cast<std::int64_t>(pore_.size()); }
  const std::vector<std::uint8_t>& pore_mask() const { return pore_; }
  /// Wall class of each solid cell, 0 on pore cells.
  const std::vector<std::int16_t>& wall_class_map() const { return wall_class_; }
  double porosity() const { return porosity_; }
  int num_wall_classes() const { return static_cast<int>(class_measure_.size()); }
  /// |dY1_{w_i}| for class i = 1..N (index i-1), staircase face measure.
  const std::vector<double>& class_measures() const { return class_measure_; }
  double interface_measure() const;
  /// Periodic stencil grid over the pore cells; its boundary faces are the interface.
  const StencilGrid& grid() const { return grid_; }

  friend ReferenceCell build_cell(const CellGeometrySpec& spec);
  friend ReferenceCell cell_from_mask(int dim, int n, std::vector<std::uint8_t> pore,
                                      std::vector<std::int16_t> wall_class);

 private:
  ReferenceCell(int dim, int n, std::vector<std::uint8_t> pore, std::vector<std::int16_t> wall_class);
  int dim_;
  int n_;
  std::vector<std::uint8_t> pore_;
  std::vector<std::int16_t> wall_class_;
  double porosity_ = 1.0;
  std::vector<double> class_measure_;
  StencilGrid grid_;
};

/// Rasterise the inclusion (a cell is solid iff its centre lies in it, with
/// periodic wrap), label wall classes and validate. Throws GeometryError for an
/// empty or disconnected pore phase and ParameterError for a bad spec.
ReferenceCell build_cell(const CellGeometrySpec& spec);

/// Build directly from a mask and class map (used by import).
ReferenceCell cell_from_mask(int dim, int n, std::vector<std::uint8_t> pore,
                             std::vector<std::int16_t> wall_class = {});

double porosity(const ReferenceCell& cell);

/// theta_{w_i} = |dY1_{w_i}| / |dY1_w|. Throws GeometryError if the interface is empty.
std::vector<double> wall_fractions(const ReferenceCell& cell);

/// Plain-text cell bitmap: a "d n" header line, then one line per grid row
/// (x varies along the line) of 0/1 digits, then a "classes" line and the
/// wall-class map as whitespace-separated integers in the same row layout.
void write_cell_bitmap(std::ostream& os, const ReferenceCell& cell);
ReferenceCell read_cell_bitmap(std::istream& is);

}  // namespace chp
