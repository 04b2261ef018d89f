#include "chp/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "chp/errors.hpp"
#include "json.hpp"

namespace chp {

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string output_header(const std::string& config_hash) {
  return std::string("# chporous ") + kArtifactVersion + " config=" + config_hash;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_text(std::ostream& os, const StencilGrid& g, std::span<const double> values,
                      const std::string& header) {
  if (static_cast<std::int32_t>(values.size()) != g.active_size())
    throw ParameterError("field output: value count does not match the grid");
  os << header << '\n' << "field " << g.dim();
  for (int a = 0; a < g.dim(); ++a) os << ' ' << g.n()[a];
  os << '\n';
  const int nx = g.n()[0];
  for (std::int64_t f = 0; f < g.full_size(); ++f) {
    const std::int32_t p = g.active_index(f);
    if (f % nx) os << ' ';
    os << (p >= 0 ? format_double(values[p]) : std::string("-"));
    if (f % nx == nx - 1) os << '\n';
  }
}

FieldText read_field_text(std::istream& is) {
  FieldText ft;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') break;
  std::istringstream hs(line);
  std::string tag;
  if (!(hs >> tag >> ft.dim) || tag != "field" || ft.dim < 1 || ft.dim > 3)
    throw ParameterError("field input: expected 'field <d> <n...>' line");
  std::int64_t total = 1;
  for (int a = 0; a < ft.dim; ++a) {
    if (!(hs >> ft.n[a]) || ft.n[a] < 1) throw ParameterError("field input: bad grid size");
    total *= ft.n[a];
  }
  ft.active.resize(static_cast<std::size_t>(total));
  std::string tok;
  for (std::int64_t f = 0; f < total; ++f) {
    if (!(is >> tok)) throw ParameterError("field input: truncated data");
    if (tok == "-") {
      ft.active[f] = 0;
      continue;
    }
    ft.active[f] = 1;
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      if (tok == "nan" || tok == "-nan") v = std::nan("");
      else if (tok == "inf") v = INFINITY;
      else if (tok == "-inf") v = -INFINITY;
      else throw ParameterError("field input: bad number '" + tok + "'");
    }
    ft.values.push_back(v);
  }
  return ft;
}

void write_vtk(std::ostream& os, const StencilGrid& g, std::span<const double> values, const std::string& name,
               const std::string& header) {
  if (static_cast<std::int32_t>(values.size()) != g.active_size())
    throw ParameterError("vtk output: value count does not match the grid");
  std::string title = header;
  if (!title.empty() && title[0] == '#') title = title.substr(title.find_first_not_of("# "));
  const auto& n = g.n();
  const auto& h = g.h();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << n[0] + 1 << ' ' << (g.dim() > 1 ? n[1] + 1 : 1) << ' ' << (g.dim() > 2 ? n[2] + 1 : 1)
     << '\n';
  os << "ORIGIN 0 0 0\n";
  os << "SPACING " << format_double(h[0]) << ' ' << format_double(g.dim() > 1 ? h[1] : 1.0) << ' '
     << format_double(g.dim() > 2 ? h[2] : 1.0) << '\n';
  os << "CELL_DATA " << g.full_size() << '\n';
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (std::int64_t f = 0; f < g.full_size(); ++f) {
    const std::int32_t p = g.active_index(f);
    os << (p >= 0 ? format_double(values[p]) : std::string("nan")) << '\n';
  }
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header, const std::vector<std::string>& columns)
    : os_(path), ncol_(columns.size()) {
  if (!os_) throw Error("cannot open " + path + " for writing");
  os_ << header << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncol_) throw ParameterError("csv: row has the wrong number of columns");
  for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_double(values[i]);
  os_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != ncol_) throw ParameterError("csv: row has the wrong number of columns");
  for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
  os_ << '\n';
}

namespace {

nlohmann::json tensor_json(const Tensor& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < t.dim; ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (int j = 0; j < t.dim; ++j) r.push_back(t(i, j));
    rows.push_back(r);
  }
  return rows;
}

Tensor tensor_from(const nlohmann::json& j, int dim, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ParameterError(std::string("tensor file: '") + key + "' must be a " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " array");
  Tensor t = Tensor::zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != dim)
      throw ParameterError(std::string("tensor file: bad row in '") + key + "'");
    for (int k = 0; k < dim; ++k) t(i, k) = j[i][k].get<double>();
  }
  return t;
}

}  // namespace

void write_tensors_json(std::ostream& os, const EffectiveTensors& t, const std::string& header) {
  nlohmann::json j;
  j["dim"] = t.dim;
  j["theta1"] = t.theta1;
  j["D"] = tensor_json(t.D);
  j["Mv"] = tensor_json(t.Mv);
  j["Mw_a"] = tensor_json(t.Mw_a);
  j["Mw_b"] = tensor_json(t.Mw_b);
  j["m"] = t.m;
  j["lambda"] = t.lambda;
  j["mv_form"] = t.mv_form == MvForm::appendix ? "appendix" : "theorem";
  os << header << '\n' << j.dump(2) << '\n';
}

EffectiveTensors read_tensors_json(std::istream& is) {
  std::string text, line;
  while (std::getline(is, line))
    if (line.empty() || line[0] != '#') text += line + '\n';
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("tensor file: ") + e.what());
  }
  try {
    EffectiveTensors t;
    t.dim = j.at("dim").get<int>();
    if (t.dim < 1 || t.dim > 3) throw ParameterError("tensor file: dim must be 1, 2 or 3");
    t.theta1 = j.at("theta1").get<double>();
    t.D = tensor_from(j.at("D"), t.dim, "D");
    t.Mv = tensor_from(j.at("Mv"), t.dim, "Mv");
    t.Mw_a = tensor_from(j.at("Mw_a"), t.dim, "Mw_a");
    t.Mw_b = tensor_from(j.at("Mw_b"), t.dim, "Mw_b");
    t.m = j.at("m").get<double>();
    t.lambda = j.at("lambda").get<double>();
    const std::string form = j.value("mv_form", std::string("appendix"));
    if (form != "appendix" && form != "theorem") throw ParameterError("tensor file: unknown mv_form " + form);
    t.mv_form = form == "appendix" ? MvForm::appendix : MvForm::theorem;
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("tensor file: ") + e.what());
  }
}

std::string tensor_report(const EffectiveTensors& t) {
  std::ostringstream os;
  auto put = [&](const char* name, const Tensor& m) {
    os << name << '\n';
    for (int i = 0; i < t.dim; ++i) {
      os << " ";
      for (int j = 0; j < t.dim; ++j) os << ' ' << format_double(m(i, j));
      os << '\n';
    }
  };
  os << "theta1 " << format_double(t.theta1) << '\n';
  os << "m " << format_double(t.m) << "  lambda " << format_double(t.lambda) << "  Mv form "
     << (t.mv_form == MvForm::appendix ? "appendix" : "theorem") << '\n';
  put("D", t.D);
  put("Mv", t.Mv);
  put("Mw_a", t.Mw_a);
  put("Mw_b", t.Mw_b);
  return os.str();
}

}  // namespace chp
