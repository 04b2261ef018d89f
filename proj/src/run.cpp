#include "chp/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "chp/errors.hpp"
#include "chp/field_io.hpp"
#include "chp/free_energy.hpp"
#include "chp/macro_solver.hpp"
#include "chp/wetting.hpp"

namespace chp {

namespace fs = std::filesystem;

std::vector<double> initial_field(const InitialConfig& init, std::uint64_t seed,
                                  const std::vector<std::array<double, 3>>& points,
                                  const std::array<double, 3>& lengths, int dim) {
  std::vector<double> out(points.size());
  if (init.type == "constant") {
    std::fill(out.begin(), out.end(), init.value);
  } else if (init.type == "noise") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : out) v = init.mean + init.amplitude * u(rng);
  } else if (init.type == "cosine") {
    for (std::size_t i = 0; i < points.size(); ++i) {
      double p = 1.0;
      for (int a = 0; a < dim; ++a)
        if (init.modes[a] != 0) p *= std::cos(init.modes[a] * std::numbers::pi * points[i][a] / lengths[a]);
      out[i] = init.mean + init.amplitude * p;
    }
  } else if (init.type == "step") {
    const double x0 = init.position * lengths[0];
    for (std::size_t i = 0; i < points.size(); ++i)
      out[i] = init.mean + (points[i][0] < x0 ? init.amplitude : -init.amplitude);
  } else {
    throw ConfigError("initial: unknown type '" + init.type + "'");
  }
  return out;
}

namespace {

class Output {
 public:
  Output(const RunConfig& c, const std::string& dir) : dir_(dir), header_(output_header(config_hash(c))) {
    fs::create_directories(dir_);
  }

  const std::string& header() const { return header_; }
  std::string path(const std::string& name) { return (fs::path(dir_) / name).string(); }

  std::ofstream open(const std::string& name, const std::string& doc) {
    const std::string p = path(name);
    std::ofstream os(p);
    if (!os) throw Error("cannot open " + p + " for writing");
    note(name, doc);
    return os;
  }

  void note(const std::string& name, const std::string& doc) {
    report.files.push_back(path(name));
    manifest_.emplace_back(name, doc);
  }

  void field(const std::string& stem, const StencilGrid& g, std::span<const double> v, bool vtk,
             const std::string& what) {
    {
      auto os = open(stem + ".txt", what + "; text field, '-' marks solid cells");
      write_field_text(os, g, v, header_);
    }
    if (vtk) {
      auto os = open(stem + ".vtk", what + "; legacy VTK structured points");
      write_vtk(os, g, v, "phi", header_);
    }
  }

  void finish() {
    std::ofstream os(path("MANIFEST.txt"));
    if (!os) throw Error("cannot write MANIFEST.txt in " + dir_);
    os << header_ << '\n';
    for (const auto& [name, doc] : manifest_) os << name << ": " << doc << '\n';
    report.files.push_back(path("MANIFEST.txt"));
  }

  RunReport report;

 private:
  std::string dir_;
  std::string header_;
  std::vector<std::pair<std::string, std::string>> manifest_;
};

const char* kSeriesDoc = "columns step,t,mass,energy,phi_min,phi_max (mass = theta1 sum phi h^d)";

std::vector<std::array<double, 3>> macro_points(const MacroGrid& g) {
  std::vector<std::array<double, 3>> pts(static_cast<std::size_t>(g.size()));
  for (std::int64_t i = 0; i < g.size(); ++i) pts[i] = g.center(i);
  return pts;
}

std::vector<std::array<double, 3>> micro_points(const PerforatedGrid& g) {
  std::vector<std::array<double, 3>> pts(static_cast<std::size_t>(g.grid().active_size()));
  for (std::int32_t p = 0; p < g.grid().active_size(); ++p) pts[p] = g.center(p);
  return pts;
}

std::string snapshot_stem(std::int64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "phi_%08lld", static_cast<long long>(step));
  return buf;
}

MicroWetting micro_wetting(const WettingConfig& w) {
  MicroWetting mw;
  mw.gamma = w.spec.gamma;
  mw.cahn = w.spec.cahn;
  mw.a = w.spec.a;
  return mw;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// Steps of size interval/k for the smallest k with interval/k <= dt_max.
std::int64_t substeps(double interval, double dt_max) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(interval / dt_max * (1.0 - 1e-12))));
}

void cell_scenario(const RunConfig& c, Output& out, bool fields) {
  const ReferenceCell cell = c.geometry.build();
  const auto& s = c.stepper.cfg;
  const CellSolution sol = solve_cell(cell, s.lambda, s.mobility, c.geometry.tol, c.geometry.mv_form, s.exec);
  if (fields) {
    for (int k = 0; k < cell.dim(); ++k) {
      const std::string ks = std::to_string(k + 1);
      auto put = [&](const std::string& name, const std::vector<double>& v, const std::string& doc) {
        auto os = out.open(name + "_" + ks + ".txt", doc + " for direction " + ks);
        write_field_text(os, cell.grid(), v, out.header());
      };
      put("xi_v", sol.xv.xi[k], "corrector xi_v");
      put("chi_a", sol.units.chi_a[k], "r-free part of xi_w");
      put("chi_b", sol.units.chi_b[k], "r coefficient of xi_w");
    }
  }
  {
    auto os = out.open("tensors.json", "theta1, D, Mv, Mw_a, Mw_b, m, lambda, mv_form (Mw(r) = Mw_a + r Mw_b)");
    write_tensors_json(os, sol.tensors, out.header());
  }
  {
    auto os = out.open("tensors.txt", "readable tensor listing and corrector residuals");
    os << out.header() << '\n' << tensor_report(sol.tensors);
    os << "porosity " << format_double(cell.porosity()) << '\n';
    for (int k = 0; k < cell.dim(); ++k)
      os << "residual xi_v " << k + 1 << ' ' << format_double(sol.xv.residual[k]) << '\n';
    if (!c.wetting.spec.a.empty()) {
      const auto gt = upscaled_g_tilde(cell, c.wetting.spec, 1, c.wetting.normalize);
      os << "g_tilde0 " << format_double(gt[0]) << '\n';
    }
  }
  out.report.lines.push_back("theta1 = " + format_double(sol.tensors.theta1));
  std::istringstream rep(tensor_report(sol.tensors));
  for (std::string line; std::getline(rep, line);) out.report.lines.push_back(line);
}

struct MacroRun {
  const MacroGrid& grid;
  const BulkFreeEnergy& energy;
  const EffectiveTensors* tensors;  // null: homogeneous stepper
  WallForcing forcing;
};

void macro_scenario(const RunConfig& c, Output& out, const MacroRun& mr) {
  const auto& g = mr.grid;
  const auto& s = c.stepper.cfg;
  const double theta = mr.tensors ? mr.tensors->theta1 : 1.0;
  MacroState st;
  st.phi = initial_field(c.initial, c.seed, macro_points(g), g.lengths(), g.dim());
  CsvWriter series(out.path("series.csv"), out.header(), {"step", "t", "mass", "energy", "phi_min", "phi_max"});
  out.note("series.csv", kSeriesDoc);
  auto record = [&] {
    const auto [lo, hi] = std::minmax_element(st.phi.begin(), st.phi.end());
    series.row({static_cast<double>(st.step), st.t, mass_total(st.phi, theta, g),
                energy_total(st.phi, mr.energy, s.lambda, g), *lo, *hi});
  };
  auto snapshot = [&] {
    out.field(snapshot_stem(st.step), g.stencil(), st.phi, c.output.vtk, "phi at step " + std::to_string(st.step));
  };
  const double mass0 = mass_total(st.phi, theta, g);
  record();
  if (c.output.every > 0) snapshot();
  for (std::int64_t n = 0; n < c.stepper.steps; ++n) {
    st = mr.tensors ? step_macro(g, st, *mr.tensors, mr.energy, s, mr.forcing)
                    : step_homogeneous(g, st, mr.energy, s);
    if (st.step % c.output.series_every == 0 || n + 1 == c.stepper.steps) record();
    if (c.output.every > 0 && st.step % c.output.every == 0) snapshot();
  }
  if (c.output.every == 0 || st.step % c.output.every != 0) snapshot();
  const double mass1 = mass_total(st.phi, theta, g);
  const double inflow = boundary_inflow_rate(g) * st.t;
  out.report.lines.push_back("steps " + std::to_string(st.step) + ", t = " + format_double(st.t));
  out.report.lines.push_back("mass " + format_double(mass0) + " -> " + format_double(mass1) +
                             " (boundary inflow " + format_double(inflow) + ")");
  out.report.lines.push_back("energy " + format_double(energy_total(st.phi, mr.energy, s.lambda, g)));
}

void homogeneous_scenario(const RunConfig& c, Output& out) {
  const MacroGrid g = c.grid.build();
  const BulkFreeEnergy e = c.energy.build();
  macro_scenario(c, out, MacroRun{g, e, nullptr, {}});
}

EffectiveTensors load_tensors(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open tensor file '" + file + "'; run cell-solve first to produce one");
  return read_tensors_json(is);
}

void upscaled_scenario(const RunConfig& c, Output& out) {
  const MacroGrid g = c.grid.build();
  const BulkFreeEnergy e = c.energy.build();
  const EffectiveTensors t = load_tensors(c.tensor_file);
  if (t.dim != g.dim()) throw ConfigError("tensor file dimension differs from grid.dim");
  WallForcing forcing;
  forcing.sign = c.wetting.g_tilde_sign;
  if (c.wetting.use_g_tilde) {
    const ReferenceCell cell = c.geometry.build();
    forcing.g_tilde = upscaled_g_tilde(cell, c.wetting.spec, static_cast<std::size_t>(g.size()), c.wetting.normalize);
    out.report.lines.push_back("g_tilde0 " + format_double(forcing.g_tilde.empty() ? 0.0 : forcing.g_tilde[0]));
  }
  macro_scenario(c, out, MacroRun{g, e, &t, forcing});
}

double micro_mass(const std::vector<double>& phi, const PerforatedGrid& g) {
  double s = 0.0;
  for (double v : phi) s += v;
  return s * g.grid().cell_volume();
}

void micro_scenario(const RunConfig& c, Output& out) {
  const ReferenceCell cell = c.geometry.build();
  const BulkFreeEnergy e = c.energy.build();
  const auto& s = c.stepper.cfg;
  const MicroWetting mw = micro_wetting(c.wetting);
  for (double eps : c.micro.eps) {
    const PerforatedGrid pg(cell, eps, c.grid.lengths, c.grid.bc, c.micro.fine_per_unit);
    const std::string tag = "eps" + std::to_string(pg.K());
    const double interval = c.micro.t_final / c.micro.samples;
    const double dt_max = c.micro.dt > 0.0 ? c.micro.dt : 0.9 * micro_dt_cap(pg, s.lambda, s.mobility);
    const std::int64_t sub = substeps(interval, dt_max);
    const double dt = interval / static_cast<double>(sub);
    MicroStepper stepper(pg, e, s.lambda, s.mobility, mw, dt, s.exec);
    MicroState st;
    st.phi = initial_field(c.initial, c.seed, micro_points(pg), pg.lengths(), pg.dim());
    CsvWriter series(out.path("micro_" + tag + ".csv"), out.header(),
                     {"sample", "t", "mass", "phi_min", "phi_max", "mu_dev_mean", "mu_dev_max"});
    out.note("micro_" + tag + ".csv",
             "columns sample,t,mass,phi_min,phi_max,mu_dev_mean,mu_dev_max (pore mass sum phi h^d; mu_dev "
             "= per eps-cell standard deviation of mu)");
    auto record = [&](int k) {
      const auto [lo, hi] = std::minmax_element(st.phi.begin(), st.phi.end());
      const auto dev = local_equilibrium_diagnostic(st.phi, pg, e, s.lambda, mw);
      series.row({static_cast<double>(k), interval * k, micro_mass(st.phi, pg), *lo, *hi, mean_of(dev),
                  max_of(dev)});
    };
    record(0);
    for (int k = 1; k <= c.micro.samples; ++k) {
      for (std::int64_t i = 0; i < sub; ++i) stepper.step(st);
      record(k);
    }
    out.field("phi_" + tag, pg.grid(), st.phi, c.output.vtk, "micro phi at the final time");
    {
      const auto avg = cell_average(st.phi, pg);
      const MacroGrid coarse = pg.coarse();
      out.field("cellavg_" + tag, coarse.stencil(), avg, c.output.vtk, "eps-cell averages of micro phi");
    }
    out.report.lines.push_back(tag + ": " + std::to_string(sub * c.micro.samples) + " steps of dt " +
                               format_double(dt));
  }
}

void compare_scenario(const RunConfig& c, Output& out) {
  const CompareResult res = compare_experiment(c);
  {
    CsvWriter csv(out.path("compare.csv"), out.header(), {"eps", "t", "l2", "max"});
    out.note("compare.csv", "columns eps,t,l2,max: eps-cell averaged micro phi minus block-averaged macro phi");
    for (const auto& r : res.runs)
      for (const auto& row : r.errors) csv.row({r.eps, row.t, row.l2, row.max});
  }
  {
    CsvWriter csv(out.path("equilibrium.csv"), out.header(),
                  {"eps", "dev_mean_start", "dev_mean_end", "dev_max_start", "dev_max_end"});
    out.note("equilibrium.csv",
             "columns eps,dev_mean_start,dev_mean_end,dev_max_start,dev_max_end: per eps-cell deviation of mu at "
             "t = 0 and the final time");
    for (const auto& r : res.runs)
      csv.row({r.eps, r.equilibrium_start, r.equilibrium_end, r.equilibrium_start_max, r.equilibrium_end_max});
  }
  out.report.lines.push_back("macro dt " + format_double(res.macro_dt));
  for (const auto& r : res.runs)
    out.report.lines.push_back("eps " + format_double(r.eps) + ": final l2 " + format_double(r.errors.back().l2) +
                               ", max " + format_double(r.errors.back().max));
}

std::array<FaceCondition, 6> channel_faces(const RunConfig& c, double g0) {
  std::array<FaceCondition, 6> f{};
  f[0] = {c.channel.inflow != 0.0 ? FaceKind::inflow : FaceKind::no_flux, c.channel.inflow};
  f[1] = {FaceKind::no_flux, 0.0};
  for (int face = 2; face < 2 * c.grid.dim; ++face) f[face] = {FaceKind::wall, g0};
  return f;
}

double channel_g0(const RunConfig& c) {
  ChannelWall wall;
  wall.dim = std::max(2, c.grid.dim);
  wall.n = c.channel.n;
  wall.classes = c.channel.classes;
  return upscaled_g0_channel(wall, c.wetting.spec);
}

void channel_scenario(const RunConfig& c, Output& out) {
  const double g0 = channel_g0(c);
  GridConfig gc = c.grid;
  gc.bc = channel_faces(c, g0);
  const MacroGrid g = gc.build();
  const BulkFreeEnergy e = c.energy.build();
  out.report.lines.push_back("g0 = " + format_double(g0));
  macro_scenario(c, out, MacroRun{g, e, nullptr, {}});
}

void contact_scenario(const RunConfig& c, Output& out) {
  const double g0 = c.contact.from_channel ? channel_g0(c) : c.contact.g0;
  const ContactAngle ca = effective_contact_angle(g0, c.wetting.spec.gamma, c.wetting.spec.cahn);
  std::vector<std::string> lines = {
      "g0 " + format_double(g0),          "a_eff " + format_double(ca.a_eff),
      "A " + format_double(ca.A),         "cos_theta " + format_double(ca.cos_theta),
      "theta_rad " + format_double(ca.theta), "theta_deg " + format_double(ca.theta * 180.0 / std::numbers::pi)};
  auto os = out.open("contact_angle.txt", "g0, a_eff, A, cos_theta, theta in radians and degrees");
  os << out.header() << '\n';
  for (const auto& l : lines) {
    os << l << '\n';
    out.report.lines.push_back(l);
  }
}

void check_f_scenario(const RunConfig& c, Output& out) {
  const bool ok = check_assumption_F(c.check_alpha1, c.check_alpha2);
  const std::string verdict = std::string("Assumption F: ") + (ok ? "satisfied" : "violated");
  auto os = out.open("check_f.txt", "double-well admissibility verdict");
  os << out.header() << '\n'
     << "alpha1 " << format_double(c.check_alpha1) << "\nalpha2 " << format_double(c.check_alpha2) << '\n'
     << verdict << '\n';
  out.report.lines.push_back(verdict);
}

}  // namespace

CompareResult compare_experiment(const RunConfig& c) {
  const ReferenceCell cell = c.geometry.build();
  const BulkFreeEnergy e = c.energy.build();
  const auto& s = c.stepper.cfg;
  const MicroWetting mw = micro_wetting(c.wetting);
  const MacroGrid g = c.grid.build();
  if (g.dim() != cell.dim()) throw ConfigError("compare: grid and cell dimensions differ");

  CompareResult res;
  const CellSolution sol = solve_cell(cell, s.lambda, s.mobility, c.geometry.tol, c.geometry.mv_form, s.exec);
  res.tensors = sol.tensors;

  const int samples = c.micro.samples;
  const double interval = c.micro.t_final / samples;

  // macro trajectory
  WallForcing forcing;
  forcing.sign = c.wetting.g_tilde_sign;
  if (c.wetting.use_g_tilde)
    forcing.g_tilde = upscaled_g_tilde(cell, c.wetting.spec, static_cast<std::size_t>(g.size()), c.wetting.normalize);
  const std::int64_t msub = substeps(interval, s.dt);
  StepperConfig mcfg = s;
  mcfg.dt = interval / static_cast<double>(msub);
  res.macro_dt = mcfg.dt;
  MacroState ms;
  ms.phi = initial_field(c.initial, c.seed, macro_points(g), g.lengths(), g.dim());
  const std::vector<double> phi0 = ms.phi;
  std::vector<Snapshot> macro_snaps{{0.0, ms.phi}};
  for (int k = 1; k <= samples; ++k) {
    for (std::int64_t i = 0; i < msub; ++i) ms = step_macro(g, ms, sol.tensors, e, mcfg, forcing);
    macro_snaps.push_back({interval * k, ms.phi});
  }

  for (double eps : c.micro.eps) {
    const PerforatedGrid pg(cell, eps, g.lengths(), g.faces(), c.micro.fine_per_unit);
    CompareEps r;
    r.eps = pg.eps();
    const double dt_max = c.micro.dt > 0.0 ? c.micro.dt : 0.9 * micro_dt_cap(pg, s.lambda, s.mobility);
    const std::int64_t sub = substeps(interval, dt_max);
    r.micro_dt = interval / static_cast<double>(sub);
    MicroStepper stepper(pg, e, s.lambda, s.mobility, mw, r.micro_dt, s.exec);
    MicroState st;
    st.phi = reconstruct_first_order(phi0, g, sol.xv, pg);
    auto dev = local_equilibrium_diagnostic(st.phi, pg, e, s.lambda, mw);
    r.equilibrium_start = mean_of(dev);
    r.equilibrium_start_max = max_of(dev);
    std::vector<Snapshot> micro_snaps{{0.0, st.phi}};
    for (int k = 1; k <= samples; ++k) {
      for (std::int64_t i = 0; i < sub; ++i) stepper.step(st);
      micro_snaps.push_back({interval * k, st.phi});
    }
    r.micro_steps = st.step;
    dev = local_equilibrium_diagnostic(st.phi, pg, e, s.lambda, mw);
    r.equilibrium_end = mean_of(dev);
    r.equilibrium_end_max = max_of(dev);
    r.errors = compare_micro_macro(micro_snaps, macro_snaps, pg, g);
    res.runs.push_back(std::move(r));
  }
  return res;
}

RunReport run(const RunConfig& c, const std::string& out_dir) {
  Output out(c, out_dir.empty() ? c.output.dir : out_dir);
  const std::string& sc = c.scenario;
  if (sc == "cell") cell_scenario(c, out, true);
  else if (sc == "tensors") cell_scenario(c, out, false);
  else if (sc == "homogeneous") homogeneous_scenario(c, out);
  else if (sc == "upscaled") upscaled_scenario(c, out);
  else if (sc == "micro") micro_scenario(c, out);
  else if (sc == "compare") compare_scenario(c, out);
  else if (sc == "channel") channel_scenario(c, out);
  else if (sc == "contact-angle") contact_scenario(c, out);
  else if (sc == "check-f") check_f_scenario(c, out);
  else throw ConfigError("unknown scenario '" + sc + "'");
  out.finish();
  return std::move(out.report);
}

}  // namespace chp
