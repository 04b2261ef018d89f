#include "chp/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "chp/errors.hpp"
#include "chp/field_io.hpp"
#include "json.hpp"

namespace chp {

using nlohmann::json;

BulkFreeEnergy EnergyConfig::build() const {
  if (from_wells) return BulkFreeEnergy::double_well(alpha1, alpha2, delta_reg);
  return BulkFreeEnergy::from_coefficients(a0, a1, a2, a3, delta_reg);
}

ReferenceCell GeometryConfig::build() const {
  if (bitmap_file.empty()) return build_cell(spec);
  std::ifstream is(bitmap_file);
  if (!is) throw ConfigError("geometry.bitmap_file: cannot open " + bitmap_file);
  return read_cell_bitmap(is);
}

MacroGrid GridConfig::build() const { return MacroGrid(dim, lengths, sizes, bc); }

namespace {

const char* kFaceNames[6] = {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    std::string msg = "config: " + what + " at '" + path + "'";
    const int line = line_of(path);
    if (line > 0) msg += " (line " + std::to_string(line) + ")";
    throw ConfigError(msg);
  }

  void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const bool ok = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
      if (!ok) fail(join(path, it.key()), "unknown key '" + it.key() + "'");
    }
  }

  double number(const json& obj, const std::string& path, const char* key, double def) const {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const json& obj, const std::string& path, const char* key, std::int64_t def) const {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    return v.get<std::int64_t>();
  }

  bool boolean(const json& obj, const std::string& path, const char* key, bool def) const {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(join(path, key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const json& obj, const std::string& path, const char* key, const std::string& def) const {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const std::string& path, const char* key,
                              const std::vector<double>& def) const {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(join(path, key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(join(path, key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::array<double, 3> vec3(const json& obj, const std::string& path, const char* key, int dim,
                             const std::array<double, 3>& def) const {
    if (!obj.contains(key)) return def;
    const auto v = numbers(obj, path, key, {});
    if (static_cast<int>(v.size()) != dim) fail(join(path, key), "expected " + std::to_string(dim) + " entries");
    std::array<double, 3> out = def;
    for (int a = 0; a < dim; ++a) out[a] = v[a];
    return out;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  int line_of(const std::string& path) const {
    const std::string key = path.substr(path.rfind('.') == std::string::npos ? 0 : path.rfind('.') + 1);
    const std::string quoted = "\"" + key + "\"";
    const std::size_t pos = text_.find(quoted);
    if (pos == std::string_view::npos) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + pos, '\n'));
  }
  std::string_view text_;
};

json vec_json(const std::array<double, 3>& v, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(v[i]);
  return a;
}

std::string face_kind_name(FaceKind k) {
  switch (k) {
    case FaceKind::periodic: return "periodic";
    case FaceKind::no_flux: return "no_flux";
    case FaceKind::inflow: return "inflow";
    case FaceKind::wall: return "wall";
  }
  return "no_flux";
}

void parse_geometry(const Reader& r, const json& j, GeometryConfig& g) {
  const std::string p = "geometry";
  r.allow(j, p, {"dim", "n", "inclusion", "wall_regions", "bitmap_file", "tol", "mv_form"});
  g.spec.dim = static_cast<int>(r.integer(j, p, "dim", 2));
  if (g.spec.dim != 2 && g.spec.dim != 3) r.fail(p + ".dim", "dimension must be 2 or 3");
  g.spec.n = static_cast<int>(r.integer(j, p, "n", 64));
  if (g.spec.n < 8) r.fail(p + ".n", "resolution must be at least 8");
  g.bitmap_file = r.string(j, p, "bitmap_file", "");
  g.tol = r.number(j, p, "tol", 1e-10);
  if (!(g.tol > 0.0)) r.fail(p + ".tol", "tolerance must be positive");
  const std::string form = r.string(j, p, "mv_form", "appendix");
  if (form == "appendix") g.mv_form = MvForm::appendix;
  else if (form == "theorem") g.mv_form = MvForm::theorem;
  else r.fail(p + ".mv_form", "expected 'appendix' or 'theorem'");
  const int d = g.spec.dim;
  if (j.contains("inclusion")) {
    const json& inc = j.at("inclusion");
    const std::string ip = p + ".inclusion";
    r.allow(inc, ip, {"type", "center", "radius", "lo", "hi"});
    const std::string type = r.string(inc, ip, "type", "none");
    if (type == "none") {
      r.allow(inc, ip, {"type"});
      g.spec.inclusion = NoInclusion{};
    } else if (type == "ball") {
      r.allow(inc, ip, {"type", "center", "radius"});
      BallInclusion b;
      b.center = r.vec3(inc, ip, "center", d, b.center);
      b.radius = r.number(inc, ip, "radius", b.radius);
      g.spec.inclusion = b;
    } else if (type == "box") {
      r.allow(inc, ip, {"type", "lo", "hi"});
      BoxInclusion b;
      b.lo = r.vec3(inc, ip, "lo", d, b.lo);
      b.hi = r.vec3(inc, ip, "hi", d, b.hi);
      g.spec.inclusion = b;
    } else {
      r.fail(ip + ".type", "expected 'none', 'ball' or 'box'");
    }
  }
  if (j.contains("wall_regions")) {
    const json& wr = j.at("wall_regions");
    if (!wr.is_array()) r.fail(p + ".wall_regions", "expected an array");
    for (std::size_t i = 0; i < wr.size(); ++i) {
      const std::string wp = p + ".wall_regions[" + std::to_string(i) + "]";
      r.allow(wr[i], wp, {"label", "lo", "hi"});
      WallRegion reg;
      reg.label = static_cast<int>(r.integer(wr[i], wp, "label", 1));
      if (reg.label < 1) r.fail(wp + ".label", "labels start at 1");
      reg.lo = r.vec3(wr[i], wp, "lo", d, reg.lo);
      reg.hi = r.vec3(wr[i], wp, "hi", d, reg.hi);
      g.spec.wall_regions.push_back(reg);
    }
  }
}

void parse_energy(const Reader& r, const json& j, EnergyConfig& e) {
  const std::string p = "energy";
  r.allow(j, p, {"a0", "a1", "a2", "a3", "alpha1", "alpha2", "delta_reg"});
  const bool wells = j.contains("alpha1") || j.contains("alpha2");
  const bool coeffs = j.contains("a0") || j.contains("a1") || j.contains("a2") || j.contains("a3");
  if (wells && coeffs) r.fail(p, "give either coefficients a0..a3 or wells alpha1/alpha2, not both");
  e.from_wells = wells;
  e.a0 = r.number(j, p, "a0", e.a0);
  e.a1 = r.number(j, p, "a1", e.a1);
  e.a2 = r.number(j, p, "a2", e.a2);
  e.a3 = r.number(j, p, "a3", e.a3);
  e.alpha1 = r.number(j, p, "alpha1", e.alpha1);
  e.alpha2 = r.number(j, p, "alpha2", e.alpha2);
  if (wells && !(e.alpha2 > e.alpha1)) r.fail(p + ".alpha2", "need alpha1 < alpha2");
  e.delta_reg = r.number(j, p, "delta_reg", e.delta_reg);
  if (!(e.delta_reg > 0.0)) r.fail(p + ".delta_reg", "must be positive");
}

void parse_grid(const Reader& r, const json& j, GridConfig& g) {
  const std::string p = "grid";
  r.allow(j, p, {"dim", "lengths", "sizes", "bc"});
  g.dim = static_cast<int>(r.integer(j, p, "dim", 2));
  if (g.dim < 1 || g.dim > 3) r.fail(p + ".dim", "dimension must be 1, 2 or 3");
  g.lengths = r.vec3(j, p, "lengths", g.dim, g.lengths);
  for (int a = 0; a < g.dim; ++a)
    if (!(g.lengths[a] > 0.0)) r.fail(p + ".lengths", "lengths must be positive");
  if (j.contains("sizes")) {
    const auto v = r.vec3(j, p, "sizes", g.dim, {64, 64, 1});
    for (int a = 0; a < g.dim; ++a) {
      if (v[a] != static_cast<int>(v[a]) || v[a] < 1) r.fail(p + ".sizes", "sizes must be positive integers");
      g.sizes[a] = static_cast<int>(v[a]);
    }
  }
  for (int a = g.dim; a < 3; ++a) {
    g.sizes[a] = 1;
    g.lengths[a] = 1.0;
  }
  if (j.contains("bc")) {
    const json& bc = j.at("bc");
    r.allow(bc, p + ".bc", {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"});
    for (int f = 0; f < 2 * g.dim; ++f) {
      if (!bc.contains(kFaceNames[f])) continue;
      const std::string fp = p + ".bc." + kFaceNames[f];
      const json& fc = bc.at(kFaceNames[f]);
      r.allow(fc, fp, {"type", "value"});
      const std::string type = r.string(fc, fp, "type", "no_flux");
      FaceCondition c;
      if (type == "periodic") c.kind = FaceKind::periodic;
      else if (type == "no_flux") c.kind = FaceKind::no_flux;
      else if (type == "inflow") c.kind = FaceKind::inflow;
      else if (type == "wall") c.kind = FaceKind::wall;
      else r.fail(fp + ".type", "expected periodic, no_flux, inflow or wall");
      c.value = r.number(fc, fp, "value", 0.0);
      g.bc[f] = c;
    }
    for (int a = 0; a < g.dim; ++a)
      if ((g.bc[2 * a].kind == FaceKind::periodic) != (g.bc[2 * a + 1].kind == FaceKind::periodic))
        r.fail(p + ".bc", "periodic faces must come in pairs");
  }
}

void parse_stepper(const Reader& r, const json& j, StepperSection& s) {
  const std::string p = "stepper";
  r.allow(j, p, {"dt", "steps", "scheme", "stabilization", "lambda", "mobility", "tol"});
  s.cfg.dt = r.number(j, p, "dt", s.cfg.dt);
  if (!(s.cfg.dt > 0.0)) r.fail(p + ".dt", "dt must be positive");
  s.steps = r.integer(j, p, "steps", s.steps);
  if (s.steps < 0) r.fail(p + ".steps", "steps must be non-negative");
  const std::string scheme = r.string(j, p, "scheme", "semi-implicit");
  if (scheme == "explicit") s.cfg.scheme = Scheme::explicit_euler;
  else if (scheme == "semi-implicit") s.cfg.scheme = Scheme::semi_implicit;
  else r.fail(p + ".scheme", "expected 'explicit' or 'semi-implicit'");
  s.cfg.stabilization = r.number(j, p, "stabilization", s.cfg.stabilization);
  if (s.cfg.stabilization < 0.0) r.fail(p + ".stabilization", "must be non-negative");
  s.cfg.lambda = r.number(j, p, "lambda", s.cfg.lambda);
  if (s.cfg.lambda < 0.0) r.fail(p + ".lambda", "lambda must be non-negative");
  s.cfg.mobility = r.number(j, p, "mobility", s.cfg.mobility);
  if (!(s.cfg.mobility > 0.0)) r.fail(p + ".mobility", "mobility must be positive");
  s.cfg.tol = r.number(j, p, "tol", s.cfg.tol);
}

void parse_initial(const Reader& r, const json& j, InitialConfig& in) {
  const std::string p = "initial";
  r.allow(j, p, {"type", "value", "mean", "amplitude", "modes", "position"});
  in.type = r.string(j, p, "type", in.type);
  if (in.type != "constant" && in.type != "noise" && in.type != "cosine" && in.type != "step")
    r.fail(p + ".type", "expected constant, noise, cosine or step");
  in.value = r.number(j, p, "value", in.value);
  in.mean = r.number(j, p, "mean", in.mean);
  in.amplitude = r.number(j, p, "amplitude", in.amplitude);
  in.position = r.number(j, p, "position", in.position);
  if (j.contains("modes")) {
    const auto v = r.numbers(j, p, "modes", {});
    if (v.empty() || v.size() > 3) r.fail(p + ".modes", "expected 1 to 3 integers");
    in.modes = {0, 0, 0};
    for (std::size_t a = 0; a < v.size(); ++a) {
      if (v[a] != static_cast<int>(v[a]) || v[a] < 0) r.fail(p + ".modes", "modes must be non-negative integers");
      in.modes[a] = static_cast<int>(v[a]);
    }
  }
}

void parse_wetting(const Reader& r, const json& j, WettingConfig& w) {
  const std::string p = "wetting";
  r.allow(j, p, {"gamma", "cahn", "a", "phi_e", "use_g_tilde", "normalize", "g_tilde_sign"});
  w.spec.gamma = r.number(j, p, "gamma", w.spec.gamma);
  w.spec.cahn = r.number(j, p, "cahn", w.spec.cahn);
  if (!(w.spec.cahn > 0.0)) r.fail(p + ".cahn", "Cahn number must be positive");
  w.spec.a = r.numbers(j, p, "a", w.spec.a);
  w.spec.phi_e = r.number(j, p, "phi_e", w.spec.phi_e);
  w.use_g_tilde = r.boolean(j, p, "use_g_tilde", w.use_g_tilde);
  w.normalize = r.boolean(j, p, "normalize", w.normalize);
  w.g_tilde_sign = r.number(j, p, "g_tilde_sign", w.g_tilde_sign);
  if (w.g_tilde_sign != 1.0 && w.g_tilde_sign != -1.0) r.fail(p + ".g_tilde_sign", "expected +1 or -1");
}

void parse_output(const Reader& r, const json& j, OutputConfig& o) {
  const std::string p = "output";
  r.allow(j, p, {"dir", "every", "series_every", "vtk"});
  o.dir = r.string(j, p, "dir", o.dir);
  o.every = r.integer(j, p, "every", o.every);
  if (o.every < 0) r.fail(p + ".every", "must be non-negative");
  o.series_every = r.integer(j, p, "series_every", o.series_every);
  if (o.series_every < 1) r.fail(p + ".series_every", "must be at least 1");
  o.vtk = r.boolean(j, p, "vtk", o.vtk);
}

void parse_micro(const Reader& r, const json& j, MicroConfig& m) {
  const std::string p = "micro";
  r.allow(j, p, {"eps", "fine_per_unit", "dt", "t_final", "samples"});
  m.eps = r.numbers(j, p, "eps", m.eps);
  if (m.eps.empty()) r.fail(p + ".eps", "need at least one eps");
  for (double e : m.eps)
    if (!(e > 0.0 && e <= 0.5)) r.fail(p + ".eps", "eps must lie in (0, 1/2]");
  m.fine_per_unit = static_cast<int>(r.integer(j, p, "fine_per_unit", m.fine_per_unit));
  if (m.fine_per_unit < 0) r.fail(p + ".fine_per_unit", "must be non-negative");
  m.dt = r.number(j, p, "dt", m.dt);
  if (m.dt < 0.0) r.fail(p + ".dt", "must be non-negative");
  m.t_final = r.number(j, p, "t_final", m.t_final);
  if (!(m.t_final > 0.0)) r.fail(p + ".t_final", "must be positive");
  m.samples = static_cast<int>(r.integer(j, p, "samples", m.samples));
  if (m.samples < 1) r.fail(p + ".samples", "must be at least 1");
}

void parse_channel(const Reader& r, const json& j, ChannelConfig& c) {
  const std::string p = "channel";
  r.allow(j, p, {"n", "classes", "inflow"});
  c.n = static_cast<int>(r.integer(j, p, "n", c.n));
  if (c.n < 1) r.fail(p + ".n", "must be positive");
  c.inflow = r.number(j, p, "inflow", c.inflow);
  if (j.contains("classes")) {
    const json& cl = j.at("classes");
    if (!cl.is_array()) r.fail(p + ".classes", "expected an array");
    for (std::size_t i = 0; i < cl.size(); ++i) {
      const std::string cp = p + ".classes[" + std::to_string(i) + "]";
      r.allow(cl[i], cp, {"label", "lo", "hi"});
      WallInterval w;
      w.label = static_cast<int>(r.integer(cl[i], cp, "label", 1));
      if (w.label < 1) r.fail(cp + ".label", "labels start at 1");
      w.lo = r.number(cl[i], cp, "lo", 0.0);
      w.hi = r.number(cl[i], cp, "hi", 1.0);
      c.classes.push_back(w);
    }
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
    throw ConfigError("config: syntax error near line " + std::to_string(line) + ": " + e.what());
  }
  const Reader r(text);
  r.allow(j, "", {"scenario", "seed", "geometry", "energy", "grid", "stepper", "initial", "wetting", "output",
                  "tensor_file", "micro", "channel", "contact", "check_f"});
  RunConfig c;
  c.scenario = r.string(j, "", "scenario", c.scenario);
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), c.scenario) == names.end())
    r.fail("scenario", "unknown scenario '" + c.scenario + "'");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      r.fail("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("geometry")) parse_geometry(r, j.at("geometry"), c.geometry);
  if (j.contains("energy")) parse_energy(r, j.at("energy"), c.energy);
  if (j.contains("grid")) parse_grid(r, j.at("grid"), c.grid);
  if (j.contains("stepper")) parse_stepper(r, j.at("stepper"), c.stepper);
  if (j.contains("initial")) parse_initial(r, j.at("initial"), c.initial);
  if (j.contains("wetting")) parse_wetting(r, j.at("wetting"), c.wetting);
  if (j.contains("output")) parse_output(r, j.at("output"), c.output);
  c.tensor_file = r.string(j, "", "tensor_file", "");
  if (j.contains("micro")) parse_micro(r, j.at("micro"), c.micro);
  if (j.contains("channel")) parse_channel(r, j.at("channel"), c.channel);
  if (j.contains("contact")) {
    const json& ct = j.at("contact");
    r.allow(ct, "contact", {"g0", "from_channel"});
    c.contact.g0 = r.number(ct, "contact", "g0", 0.0);
    c.contact.from_channel = r.boolean(ct, "contact", "from_channel", false);
  }
  if (j.contains("check_f")) {
    const json& cf = j.at("check_f");
    r.allow(cf, "check_f", {"alpha1", "alpha2"});
    c.check_alpha1 = r.number(cf, "check_f", "alpha1", c.check_alpha1);
    c.check_alpha2 = r.number(cf, "check_f", "alpha2", c.check_alpha2);
  }

  if (c.scenario == "upscaled" && c.tensor_file.empty())
    throw ConfigError("config: the upscaled scenario needs 'tensor_file'; run cell-solve first to produce one");
  if ((c.scenario == "micro" || c.scenario == "compare") && c.grid.dim != c.geometry.spec.dim)
    r.fail("grid.dim", "grid and cell dimensions differ");
  if (c.scenario == "channel" && c.grid.dim < 2) r.fail("grid.dim", "the channel needs at least two dimensions");
  return c;
}

std::string serialize(const RunConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["seed"] = c.seed;

  json g;
  const int d = c.geometry.spec.dim;
  g["dim"] = d;
  g["n"] = c.geometry.spec.n;
  g["tol"] = c.geometry.tol;
  g["mv_form"] = c.geometry.mv_form == MvForm::appendix ? "appendix" : "theorem";
  if (!c.geometry.bitmap_file.empty()) g["bitmap_file"] = c.geometry.bitmap_file;
  json inc;
  if (const auto* b = std::get_if<BallInclusion>(&c.geometry.spec.inclusion)) {
    inc = {{"type", "ball"}, {"center", vec_json(b->center, d)}, {"radius", b->radius}};
  } else if (const auto* x = std::get_if<BoxInclusion>(&c.geometry.spec.inclusion)) {
    inc = {{"type", "box"}, {"lo", vec_json(x->lo, d)}, {"hi", vec_json(x->hi, d)}};
  } else {
    inc = {{"type", "none"}};
  }
  g["inclusion"] = inc;
  json wr = json::array();
  for (const auto& w : c.geometry.spec.wall_regions)
    wr.push_back({{"label", w.label}, {"lo", vec_json(w.lo, d)}, {"hi", vec_json(w.hi, d)}});
  g["wall_regions"] = wr;
  j["geometry"] = g;

  json e;
  if (c.energy.from_wells) {
    e["alpha1"] = c.energy.alpha1;
    e["alpha2"] = c.energy.alpha2;
  } else {
    e["a0"] = c.energy.a0;
    e["a1"] = c.energy.a1;
    e["a2"] = c.energy.a2;
    e["a3"] = c.energy.a3;
  }
  e["delta_reg"] = c.energy.delta_reg;
  j["energy"] = e;

  json gr;
  gr["dim"] = c.grid.dim;
  gr["lengths"] = vec_json(c.grid.lengths, c.grid.dim);
  json sizes = json::array();
  for (int a = 0; a < c.grid.dim; ++a) sizes.push_back(c.grid.sizes[a]);
  gr["sizes"] = sizes;
  json bc;
  for (int f = 0; f < 2 * c.grid.dim; ++f)
    bc[kFaceNames[f]] = {{"type", face_kind_name(c.grid.bc[f].kind)}, {"value", c.grid.bc[f].value}};
  gr["bc"] = bc;
  j["grid"] = gr;

  const StepperConfig& s = c.stepper.cfg;
  j["stepper"] = {{"dt", s.dt},
                  {"steps", c.stepper.steps},
                  {"scheme", s.scheme == Scheme::explicit_euler ? "explicit" : "semi-implicit"},
                  {"stabilization", s.stabilization},
                  {"lambda", s.lambda},
                  {"mobility", s.mobility},
                  {"tol", s.tol}};

  json modes = json::array();
  for (int a = 0; a < 3; ++a) modes.push_back(c.initial.modes[a]);
  j["initial"] = {{"type", c.initial.type},         {"value", c.initial.value}, {"mean", c.initial.mean},
                  {"amplitude", c.initial.amplitude}, {"modes", modes},         {"position", c.initial.position}};

  j["wetting"] = {{"gamma", c.wetting.spec.gamma},       {"cahn", c.wetting.spec.cahn},
                  {"a", c.wetting.spec.a},               {"phi_e", c.wetting.spec.phi_e},
                  {"use_g_tilde", c.wetting.use_g_tilde}, {"normalize", c.wetting.normalize},
                  {"g_tilde_sign", c.wetting.g_tilde_sign}};

  j["output"] = {{"dir", c.output.dir},
                 {"every", c.output.every},
                 {"series_every", c.output.series_every},
                 {"vtk", c.output.vtk}};
  j["tensor_file"] = c.tensor_file;
  j["micro"] = {{"eps", c.micro.eps},
                {"fine_per_unit", c.micro.fine_per_unit},
                {"dt", c.micro.dt},
                {"t_final", c.micro.t_final},
                {"samples", c.micro.samples}};
  json cl = json::array();
  for (const auto& w : c.channel.classes) cl.push_back({{"label", w.label}, {"lo", w.lo}, {"hi", w.hi}});
  j["channel"] = {{"n", c.channel.n}, {"classes", cl}, {"inflow", c.channel.inflow}};
  j["contact"] = {{"g0", c.contact.g0}, {"from_channel", c.contact.from_channel}};
  j["check_f"] = {{"alpha1", c.check_alpha1}, {"alpha2", c.check_alpha2}};
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& c) { return fnv1a64_hex(serialize(c)); }

}  // namespace chp
