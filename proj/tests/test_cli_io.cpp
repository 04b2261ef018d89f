#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "chp/config.hpp"
#include "chp/errors.hpp"
#include "chp/field_io.hpp"
#include "chp/run.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("chp_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kSmallRun = R"({
  "scenario": "homogeneous",
  "seed": 7,
  "grid": {"dim": 2, "sizes": [16, 16], "lengths": [1, 1]},
  "stepper": {"dt": 1e-4, "steps": 20, "lambda": 0.05},
  "initial": {"type": "noise", "mean": 0.0, "amplitude": 0.1},
  "output": {"every": 10, "series_every": 5, "vtk": true}
})";

}  // namespace

TEST_CASE("configuration defaults") {
  const RunConfig c = parse_config("{}");
  CHECK(c.scenario == "homogeneous");
  CHECK(c.seed == 0);
  CHECK(c.stepper.cfg.lambda == 0.05);
  CHECK(c.stepper.cfg.scheme == Scheme::semi_implicit);
  CHECK(c.grid.dim == 2);
  CHECK(c.grid.sizes[0] == 64);
  CHECK(c.geometry.mv_form == MvForm::appendix);
  CHECK(c.wetting.g_tilde_sign == -1.0);
  CHECK(c.output.vtk);
}

TEST_CASE("configuration errors name the key and line") {
  const std::string e = config_error("{\n  \"stepper\": {\n    \"lamda\": 0.05\n  }\n}");
  CHECK(e.find("unknown key 'lamda'") != std::string::npos);
  CHECK(e.find("stepper.lamda") != std::string::npos);
  CHECK(e.find("line 3") != std::string::npos);

  CHECK(config_error("{\"stepper\": {\"dt\": \"fast\"}}").find("stepper.dt") != std::string::npos);
  CHECK(config_error("{\"stepper\": {\"dt\": -1}}") != "");
  CHECK(config_error("{\"grid\": {\"bc\": {\"x_lo\": {\"type\": \"periodic\"}}}}") != "");
  CHECK(config_error("{\"energy\": {\"a3\": 1, \"alpha1\": 1}}") != "");
  CHECK(config_error("{\"scenario\": \"banana\"}") != "");
  CHECK(config_error("{\"grid\": {\"sizes\": [16, 16\n}").find("line") != std::string::npos);
  CHECK(config_error("{\"scenario\": \"upscaled\"}").find("run cell-solve first") != std::string::npos);
}

TEST_CASE("canonical serialisation is a fixed point") {
  const RunConfig a = parse_config(kSmallRun);
  const std::string s = serialize(a);
  const RunConfig b = parse_config(s);
  CHECK(serialize(b) == s);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  RunConfig c = a;
  c.seed = 8;
  CHECK(config_hash(c) != config_hash(a));
}

TEST_CASE("text formats") {
  SUBCASE("hash and number formatting") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0}) CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  SUBCASE("field text round trip") {
    std::vector<std::uint8_t> mask(64, 1);
    mask[9] = mask[10] = 0;
    const StencilGrid g(2, {8, 8, 1}, {0.125, 0.125, 1.0}, {true, true, false}, mask);
    const auto u = oracle::uniform(static_cast<std::size_t>(g.active_size()), -1, 1, 3);
    std::stringstream ss;
    write_field_text(ss, g, u, "# test");
    const FieldText f = read_field_text(ss);
    CHECK(f.dim == 2);
    CHECK(f.n[0] == 8);
    CHECK(f.active == mask);
    CHECK(f.values == u);
  }
  SUBCASE("tensor JSON round trip") {
    EffectiveTensors t = EffectiveTensors::trivial(2, 1.3, 0.04);
    t.theta1 = 0.71;
    t.D(0, 1) = 1.0 / 3.0;
    t.Mw_b(1, 1) = -0.2;
    std::stringstream ss;
    write_tensors_json(ss, t, "# test");
    const EffectiveTensors r = read_tensors_json(ss);
    CHECK(r.theta1 == t.theta1);
    CHECK(r.D.v == t.D.v);
    CHECK(r.Mw_b.v == t.Mw_b.v);
    CHECK(r.lambda == t.lambda);
    CHECK(r.m == t.m);
  }
}

TEST_CASE("check-f scenario") {
  RunConfig c = parse_config("{\"scenario\": \"check-f\", \"check_f\": {\"alpha1\": 1, \"alpha2\": 2}}");
  const auto dir = scratch("checkf");
  auto rep = run(c, dir.string());
  REQUIRE(rep.lines.size() == 1);
  CHECK(rep.lines[0] == "Assumption F: satisfied");
  c.check_alpha2 = 1.1;
  rep = run(c, dir.string());
  CHECK(rep.lines[0] == "Assumption F: violated");
  fs::remove_all(dir);
}

TEST_CASE("every artifact carries the version and config header") {
  const RunConfig c = parse_config(kSmallRun);
  const auto dir = scratch("headers");
  const RunReport rep = run(c, dir.string());
  const std::string header = output_header(config_hash(c));
  CHECK(rep.files.size() >= 4);
  bool saw_vtk = false;
  for (const auto& f : rep.files) {
    std::ifstream is(f);
    std::string first, second;
    std::getline(is, first);
    std::getline(is, second);
    CAPTURE(f);
    if (f.ends_with(".vtk")) {
      saw_vtk = true;
      CHECK(second == header.substr(2));
    } else if (f.ends_with(".json")) {
      CHECK(first.find(config_hash(c)) != std::string::npos);
    } else {
      CHECK(first == header);
    }
  }
  CHECK(saw_vtk);
  CHECK(fs::exists(dir / "MANIFEST.txt"));
  CHECK(fs::exists(dir / "series.csv"));
  fs::remove_all(dir);
}

TEST_CASE("fixed seed gives byte-identical output") {
  const RunConfig c = parse_config(kSmallRun);
  const auto a = scratch("det_a"), b = scratch("det_b");
  const RunReport ra = run(c, a.string());
  run(c, b.string());
  for (const auto& f : ra.files) {
    const fs::path rel = fs::relative(f, a);
    CAPTURE(rel);
    CHECK(slurp(f) == slurp(b / rel));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("compare on a cell without inclusion reproduces the macro run") {
  RunConfig c = parse_config(R"({
    "scenario": "compare",
    "seed": 3,
    "geometry": {"n": 8},
    "grid": {"dim": 2, "sizes": [32, 32]},
    "stepper": {"dt": 1e-6, "scheme": "explicit", "lambda": 0.05},
    "initial": {"type": "noise", "amplitude": 0.2},
    "micro": {"eps": [0.25], "dt": 1e-6, "t_final": 2e-5, "samples": 2}
  })");
  const CompareResult r = compare_experiment(c);
  REQUIRE(r.runs.size() == 1);
  CHECK(r.runs[0].micro_dt == r.macro_dt);
  REQUIRE(r.runs[0].errors.size() == 3);
  for (const auto& row : r.runs[0].errors) {
    CHECK(row.l2 <= 1e-10);
    CHECK(row.max <= 1e-10);
  }
}
