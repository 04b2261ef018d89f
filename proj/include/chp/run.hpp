#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "chp/config.hpp"
#include "chp/micro_solver.hpp"

namespace chp {

struct RunReport {
  std::vector<std::string> files;  // paths written, in order
  std::vector<std::string> lines;  // monitor summaries
};

/// Run one scenario and write its artifacts. An empty `out_dir` uses config.output.dir.
RunReport run(const RunConfig& config, const std::string& out_dir = "");

/// Initial data at the given points. Noise draws from mt19937_64(seed) in point order.
std::vector<double> initial_field(const InitialConfig& init, std::uint64_t seed,
                                  const std::vector<std::array<double, 3>>& points,
                                  const std::array<double, 3>& lengths, int dim);

/// Per-eps outcome of the micro-vs-macro experiment.
struct CompareEps {
  double eps = 0.0;
  std::vector<ErrorRow> errors;     // one row per sample time
  double equilibrium_start = 0.0;   // mean over eps-cells of the mu deviation at t = 0
  double equilibrium_end = 0.0;     // same at the final time
  double equilibrium_start_max = 0.0;
  double equilibrium_end_max = 0.0;
  std::int64_t micro_steps = 0;
  double micro_dt = 0.0;
};

struct CompareResult {
  EffectiveTensors tensors;
  double macro_dt = 0.0;
  std::vector<CompareEps> runs;
};

/// Macro run on config.grid with the cell tensors, micro runs for each
/// config.micro.eps from the first-order reconstruction of the same datum, and
/// the cell-averaged errors at config.micro.samples equally spaced times.
CompareResult compare_experiment(const RunConfig& config);

}  // namespace chp
