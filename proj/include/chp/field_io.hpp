#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chp/cell_solver.hpp"
#include "chp/stencil_grid.hpp"

namespace chp {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// "# chporous <version> config=<hash>"
std::string output_header(const std::string& config_hash);

/// Shortest-safe decimal form with 17 significant digits.
std::string format_double(double v);

/// Lossless text snapshot of a compact field on a StencilGrid:
///   <header line>
///   field <d> <n0> [<n1> [<n2>]]
///   one line per grid row (x along the line); inactive cells are written as '-'.
void write_field_text(std::ostream& os, const StencilGrid& g, std::span<const double> values,
                      const std::string& header);

struct FieldText {
  int dim = 0;
  std::array<int, 3> n{1, 1, 1};
  std::vector<std::uint8_t> active;  // full grid, x fastest
  std::vector<double> values;        // compact over active cells
};
FieldText read_field_text(std::istream& is);

/// Legacy VTK STRUCTURED_POINTS, ASCII, one cell-centred scalar; inactive cells
/// are written as nan. The title line carries `header` without the leading '#'.
void write_vtk(std::ostream& os, const StencilGrid& g, std::span<const double> values, const std::string& name,
               const std::string& header);

/// CSV file with a leading header comment and a column line. Numbers use format_double.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream os_;
  std::size_t ncol_;
};

/// Effective tensors as JSON (after a header comment line).
void write_tensors_json(std::ostream& os, const EffectiveTensors& t, const std::string& header);
EffectiveTensors read_tensors_json(std::istream& is);

/// Human-readable tensor listing.
std::string tensor_report(const EffectiveTensors& t);

}  // namespace chp
