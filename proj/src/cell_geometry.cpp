#include "chp/cell_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "chp/errors.hpp"

namespace chp {
namespace {

std::int64_t ipow(int n, int d) {
  std::int64_t r = 1;
  for (int a = 0; a < d; ++a) r *= n;
  return r;
}

std::array<double, 3> center_of(std::int64_t full, int dim, int n) {
  std::array<double, 3> c{0.5, 0.5, 0.5};
  for (int a = 0; a < dim; ++a) {
    c[a] = (static_cast<double>(full % n) + 0.5) / n;
    full /= n;
  }
  return c;
}

double wrap_delta(double x, double c) {
  double d = x - c;
  d -= std::round(d);
  return d;
}

void validate(const CellGeometrySpec& s) {
  if (s.dim != 2 && s.dim != 3) throw ParameterError("cell: dimension must be 2 or 3");
  if (s.n < 8) throw ParameterError("cell: resolution must be at least 8");
  if (const auto* b = std::get_if<BallInclusion>(&s.inclusion)) {
    if (!(b->radius > 0.0 && b->radius < 0.5)) throw ParameterError("cell: ball radius must lie in (0, 0.5)");
    for (int a = 0; a < s.dim; ++a)
      if (!(b->center[a] >= 0.0 && b->center[a] <= 1.0)) throw ParameterError("cell: ball centre outside [0,1]^d");
  } else if (const auto* x = std::get_if<BoxInclusion>(&s.inclusion)) {
    for (int a = 0; a < s.dim; ++a)
      if (!(x->lo[a] >= 0.0 && x->lo[a] < x->hi[a] && x->hi[a] <= 1.0))
        throw ParameterError("cell: box corners must satisfy 0 <= lo < hi <= 1");
  } else if (const auto* m = std::get_if<BitmapInclusion>(&s.inclusion)) {
    if (static_cast<std::int64_t>(m->pore.size()) != ipow(s.n, s.dim))
      throw ParameterError("cell: bitmap size does not match n^d");
  }
  for (const auto& r : s.wall_regions)
    if (r.label < 1) throw ParameterError("cell: wall-class labels start at 1");
}

bool solid_at(const CellGeometrySpec& s, const std::array<double, 3>& c, std::int64_t full) {
  return std::visit(
      [&](const auto& inc) -> bool {
        using T = std::decay_t<decltype(inc)>;
        if constexpr (std::is_same_v<T, NoInclusion>) {
          return false;
        } else if constexpr (std::is_same_v<T, BallInclusion>) {
          double r2 = 0.0;
          for (int a = 0; a < s.dim; ++a) {
            const double d = wrap_delta(c[a], inc.center[a]);
            r2 += d * d;
          }
          return r2 <= inc.radius * inc.radius;
        } else if constexpr (std::is_same_v<T, BoxInclusion>) {
          for (int a = 0; a < s.dim; ++a)
            if (c[a] < inc.lo[a] || c[a] > inc.hi[a]) return false;
          return true;
        } else {
          return inc.pore[full] == 0;
        }
      },
      s.inclusion);
}

}  // namespace

ReferenceCell::ReferenceCell(int dim, int n, std::vector<std::uint8_t> pore,
                             std::vector<std::int16_t> wall_class)
    : dim_(dim),
      n_(n),
      pore_(std::move(pore)),
      wall_class_(std::move(wall_class)),
      grid_(dim, {n, n, n}, {1.0 / n, 1.0 / n, 1.0 / n}, {true, true, true}, pore_, wall_class_) {
  const std::int64_t total = num_cells();
  const std::int64_t npore = grid_.active_size();
  if (npore == 0) throw GeometryError("cell: pore phase is empty (porosity 0)");
  porosity_ = static_cast<double>(npore) / static_cast<double>(total);

  // connectivity under periodic face adjacency
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(npore), 0);
  std::vector<std::int32_t> stack{0};
  seen[0] = 1;
  std::int64_t reached = 1;
  while (!stack.empty()) {
    const std::int32_t p = stack.back();
    stack.pop_back();
    for (int a = 0; a < dim_; ++a)
      for (int up = 0; up < 2; ++up) {
        const std::int32_t q = grid_.neighbor(p, a, up);
        if (q >= 0 && !seen[q]) {
          seen[q] = 1;
          ++reached;
          stack.push_back(q);
        }
      }
  }
  if (reached != npore) throw GeometryError("cell: pore phase is not connected");

  int nclass = 1;
  for (auto c : wall_class_) nclass = std::max<int>(nclass, c);
  class_measure_.assign(static_cast<std::size_t>(nclass), 0.0);
  const double face_area = std::pow(1.0 / n_, dim_ - 1);
  for (const auto& f : grid_.boundary_faces()) class_measure_[f.wall_class - 1] += face_area;
}

double ReferenceCell::interface_measure() const {
  return std::accumulate(class_measure_.begin(), class_measure_.end(), 0.0);
}

ReferenceCell build_cell(const CellGeometrySpec& spec) {
  validate(spec);
  const std::int64_t total = ipow(spec.n, spec.dim);
  std::vector<std::uint8_t> pore(static_cast<std::size_t>(total), 1);
  std::vector<std::int16_t> cls(static_cast<std::size_t>(total), 0);
  for (std::int64_t f = 0; f < total; ++f) {
    const auto c = center_of(f, spec.dim, spec.n);
    if (!solid_at(spec, c, f)) continue;
    pore[f] = 0;
    std::int16_t label = 1;
    for (const auto& r : spec.wall_regions) {
      bool in = true;
      for (int a = 0; a < spec.dim; ++a) in = in && c[a] >= r.lo[a] && c[a] <= r.hi[a];
      if (in) {
        label = static_cast<std::int16_t>(r.label);
        break;
      }
    }
    cls[f] = label;
  }
  return ReferenceCell(spec.dim, spec.n, std::move(pore), std::move(cls));
}

ReferenceCell cell_from_mask(int dim, int n, std::vector<std::uint8_t> pore,
                             std::vector<std::int16_t> wall_class) {
  if (dim != 2 && dim != 3) throw ParameterError("cell: dimension must be 2 or 3");
  if (n < 8) throw ParameterError("cell: resolution must be at least 8");
  const std::int64_t total = ipow(n, dim);
  if (static_cast<std::int64_t>(pore.size()) != total) throw ParameterError("cell: mask size does not match n^d");
  if (wall_class.empty()) {
    wall_class.assign(pore.size(), 0);
    for (std::size_t i = 0; i < pore.size(); ++i) wall_class[i] = pore[i] ? 0 : 1;
  }
  if (wall_class.size() != pore.size()) throw ParameterError("cell: wall-class map size does not match n^d");
  for (std::size_t i = 0; i < pore.size(); ++i) {
    if (pore[i]) wall_class[i] = 0;
    else if (wall_class[i] < 1) wall_class[i] = 1;
  }
  return ReferenceCell(dim, n, std::move(pore), std::move(wall_class));
}

double porosity(const ReferenceCell& cell) { return cell.porosity(); }

std::vector<double> wall_fractions(const ReferenceCell& cell) {
  const double total = cell.interface_measure();
  if (!(total > 0.0)) throw GeometryError("wall fractions: the cell has no pore-solid interface");
  std::vector<double> out = cell.class_measures();
  for (auto& v : out) v /= total;
  return out;
}

void write_cell_bitmap(std::ostream& os, const ReferenceCell& cell) {
  const int n = cell.n();
  const std::int64_t rows = cell.num_cells() / n;
  os << cell.dim() << ' ' << n << '\n';
  const auto& pore = cell.pore_mask();
  for (std::int64_t r = 0; r < rows; ++r) {
    for (int i = 0; i < n; ++i) os << (pore[r * n + i] ? '1' : '0');
    os << '\n';
  }
  os << "classes\n";
  const auto& cls = cell.wall_class_map();
  for (std::int64_t r = 0; r < rows; ++r) {
    for (int i = 0; i < n; ++i) os << (i ? " " : "") << cls[r * n + i];
    os << '\n';
  }
}

ReferenceCell read_cell_bitmap(std::istream& is) {
  int dim = 0, n = 0;
  if (!(is >> dim >> n)) throw ParameterError("cell bitmap: missing 'd n' header");
  if ((dim != 2 && dim != 3) || n < 1) throw ParameterError("cell bitmap: bad header");
  const std::int64_t total = ipow(n, dim);
  const std::int64_t rows = total / n;
  std::vector<std::uint8_t> pore(static_cast<std::size_t>(total));
  std::string line;
  for (std::int64_t r = 0; r < rows; ++r) {
    if (!(is >> line) || static_cast<int>(line.size()) != n)
      throw ParameterError("cell bitmap: row " + std::to_string(r) + " has the wrong length");
    for (int i = 0; i < n; ++i) {
      if (line[i] != '0' && line[i] != '1') throw ParameterError("cell bitmap: digits must be 0 or 1");
      pore[r * n + i] = line[i] == '1';
    }
  }
  std::vector<std::int16_t> cls;
  std::string tag;
  if (is >> tag) {
    if (tag != "classes") throw ParameterError("cell bitmap: expected 'classes' section");
    cls.resize(pore.size());
    for (auto& c : cls) {
      int v = 0;
      if (!(is >> v)) throw ParameterError("cell bitmap: truncated wall-class map");
      c = static_cast<std::int16_t>(v);
    }
  }
  return cell_from_mask(dim, n, std::move(pore), std::move(cls));
}

}  // namespace chp
