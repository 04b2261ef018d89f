#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chp/cell_geometry.hpp"
#include "chp/cell_solver.hpp"
#include "chp/free_energy.hpp"
#include "chp/macro_grid.hpp"
#include "chp/macro_solver.hpp"
#include "chp/wetting.hpp"

namespace chp {

struct EnergyConfig {
  bool from_wells = false;  // true: alpha1/alpha2 given
  double a0 = 0.0, a1 = -1.0, a2 = 0.0, a3 = 1.0;
  double alpha1 = 1.0, alpha2 = 2.0;
  double delta_reg = BulkFreeEnergy::kDefaultRegularization;
  BulkFreeEnergy build() const;
};

struct GeometryConfig {
  CellGeometrySpec spec;
  std::string bitmap_file;  // when set, the cell is read from this file
  double tol = 1e-10;
  MvForm mv_form = MvForm::appendix;
  ReferenceCell build() const;
};

struct GridConfig {
  int dim = 2;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  std::array<int, 3> sizes{64, 64, 1};
  std::array<FaceCondition, 6> bc{};
  MacroGrid build() const;
};

struct StepperSection {
  StepperConfig cfg;
  std::int64_t steps = 100;
};

struct InitialConfig {
  std::string type = "constant";  // constant | noise | cosine | step
  double value = 0.0;             // constant
  double mean = 0.0;              // noise, cosine, step
  double amplitude = 0.05;        // noise: half-width; cosine: amplitude; step: half jump
  std::array<int, 3> modes{1, 1, 0};  // cosine: prod_a cos(modes_a pi x_a / L_a)
  double position = 0.5;          // step: fraction of L0 where the jump sits
};

struct WettingConfig {
  WettingSpec spec;
  bool use_g_tilde = false;  // add g~0 from the cell to the upscaled fourth-order term
  bool normalize = false;
  double g_tilde_sign = -1.0;
};

struct OutputConfig {
  std::string dir = "out";
  std::int64_t every = 0;         // snapshot cadence in steps; 0 writes the final state only
  std::int64_t series_every = 1;  // time-series cadence in steps
  bool vtk = true;
};

struct MicroConfig {
  std::vector<double> eps{0.25};
  int fine_per_unit = 0;
  double dt = 0.0;  // 0: largest step under 0.9 of the cap that divides the sample interval
  double t_final = 1e-3;
  int samples = 1;
};

struct ChannelConfig {
  int n = 64;
  std::vector<WallInterval> classes;
  double inflow = 0.0;  // J_l on the x0 = 0 face
};

struct ContactConfig {
  double g0 = 0.0;
  bool from_channel = false;
};

struct RunConfig {
  std::string scenario = "homogeneous";
  std::uint64_t seed = 0;
  GeometryConfig geometry;
  EnergyConfig energy;
  GridConfig grid;
  StepperSection stepper;
  InitialConfig initial;
  WettingConfig wetting;
  OutputConfig output;
  std::string tensor_file;
  MicroConfig micro;
  ChannelConfig channel;
  ContactConfig contact;
  double check_alpha1 = 1.0;
  double check_alpha2 = 2.0;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"cell",    "tensors", "homogeneous", "upscaled",     "micro",
                                                 "compare", "channel", "contact-angle", "check-f"};
  return names;
}

/// Parse and validate JSON configuration text. Unknown keys, wrong types and
/// out-of-range values raise ConfigError naming the key path and its line.
RunConfig parse_config(std::string_view text);

/// Canonical JSON with every default filled in; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& c);

/// FNV-1a hash of the canonical serialisation.
std::string config_hash(const RunConfig& c);

}  // namespace chp
