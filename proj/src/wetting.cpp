#include "chp/wetting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chp/errors.hpp"

namespace chp {
namespace {

constexpr double kCellVolume = 1.0;  // |Y| with unit cell lengths

double ratio(const WettingSpec& s) {
  if (!(s.cahn > 0.0)) throw ParameterError("wetting: Cahn number must be positive");
  return s.gamma / s.cahn;
}

}  // namespace

double robin_g(const WettingSpec& spec, int wall_class) {
  if (wall_class < 1 || wall_class > static_cast<int>(spec.a.size()))
    throw ParameterError("wetting: no coefficient for wall class " + std::to_string(wall_class));
  return -ratio(spec) * spec.a[wall_class - 1];
}

double robin_g(const WettingSpec& spec, int wall_class, std::size_t node) {
  if (wall_class < 1 || wall_class > static_cast<int>(spec.a_fields.size()))
    throw ParameterError("wetting: no coefficient field for wall class " + std::to_string(wall_class));
  const auto& f = spec.a_fields[wall_class - 1];
  if (node >= f.size()) throw ParameterError("wetting: node index outside the coefficient field");
  return -ratio(spec) * f[node];
}

std::vector<double> channel_class_measures(const ChannelWall& wall) {
  if (wall.dim != 2 && wall.dim != 3) throw ParameterError("channel wall: dimension must be 2 or 3");
  if (wall.n < 1) throw ParameterError("channel wall: resolution must be positive");
  int nclass = 1;
  for (const auto& c : wall.classes) {
    if (c.label < 1) throw ParameterError("channel wall: class labels start at 1");
    nclass = std::max(nclass, c.label);
  }
  std::vector<double> m(static_cast<std::size_t>(nclass), 0.0);
  const double h = 1.0 / wall.n;
  // faces along the remaining wall directions carry the same class, so a
  // strip of n^{d-2} faces of area h^{d-1} sums to h per y1 position
  for (int i = 0; i < wall.n; ++i) {
    const double y = (i + 0.5) * h;
    int label = 1;
    for (const auto& c : wall.classes)
      if (y >= c.lo && y <= c.hi) {
        label = c.label;
        break;
      }
    m[label - 1] += h;
  }
  return m;
}

double upscaled_g0_channel(std::span<const double> class_measures, const WettingSpec& spec) {
  if (spec.a.empty()) throw ParameterError("channel g0: no wetting coefficients");
  if (class_measures.size() < spec.a.size()) {
    std::ostringstream os;
    os << "channel g0: " << spec.a.size() << " coefficients but only " << class_measures.size()
       << " class measures";
    throw GeometryError(os.str());
  }
  double total = 0.0;
  for (double v : class_measures) total += v;
  if (!(total > 0.0)) throw GeometryError("channel g0: the wall has zero measure");
  double s = 0.0;
  for (std::size_t i = 0; i < spec.a.size(); ++i) s += spec.a[i] * class_measures[i];
  return -ratio(spec) * s / kCellVolume;
}

double upscaled_g0_channel(const ChannelWall& wall, const WettingSpec& spec) {
  const auto m = channel_class_measures(wall);
  return upscaled_g0_channel(m, spec);
}

std::vector<double> upscaled_g_tilde(const ReferenceCell& cell, const WettingSpec& spec, std::size_t nodes,
                                     bool normalize) {
  const auto& meas = cell.class_measures();
  if (cell.interface_measure() == 0.0) throw GeometryError("g~0: the cell has no pore-solid interface");
  const double r = ratio(spec);
  const double volume = normalize ? kCellVolume : 1.0;
  std::vector<double> out(nodes, 0.0);
  if (!spec.a_fields.empty()) {
    if (spec.a_fields.size() > meas.size())
      throw GeometryError("g~0: more coefficient fields than wall classes in the cell");
    for (std::size_t k = 0; k < spec.a_fields.size(); ++k)
      if (spec.a_fields[k].size() != nodes) throw ParameterError("g~0: coefficient field has the wrong length");
    for (std::size_t x = 0; x < nodes; ++x) {
      double s = 0.0;
      for (std::size_t k = 0; k < spec.a_fields.size(); ++k) s += spec.a_fields[k][x] * meas[k];
      out[x] = -r * s / volume;
    }
    return out;
  }
  if (spec.a.size() > meas.size()) throw GeometryError("g~0: more coefficients than wall classes in the cell");
  double s = 0.0;
  for (std::size_t k = 0; k < spec.a.size(); ++k) s += spec.a[k] * meas[k];
  std::fill(out.begin(), out.end(), -r * s / volume);
  return out;
}

std::vector<double> alpha_field(std::span<const double> theta_w1, double a1, double a2, double gamma, double cahn) {
  if (!(cahn > 0.0)) throw ParameterError("alpha: Cahn number must be positive");
  const double r = gamma / cahn;
  std::vector<double> out(theta_w1.size());
  for (std::size_t i = 0; i < theta_w1.size(); ++i) {
    const double t = theta_w1[i];
    if (!(t >= 0.0 && t <= 1.0)) {
      std::ostringstream os;
      os << "alpha: wall fraction " << t << " at node " << i << " is outside [0, 1]";
      throw ParameterError(os.str());
    }
    out[i] = -r * (a1 * t + a2 * (1.0 - t));
  }
  return out;
}

double contact_cosine(double A) {
  return 0.5 * (std::pow(1.0 + A, 1.5) - std::pow(1.0 - A, 1.5));
}

ContactAngle effective_contact_angle(double g0, double gamma, double cahn) {
  if (!(gamma > 0.0)) throw ParameterError("contact angle: gamma must be positive");
  if (!(cahn > 0.0)) throw ParameterError("contact angle: Cahn number must be positive");
  ContactAngle c;
  c.a_eff = g0 * cahn / gamma;
  c.A = std::sqrt(2.0) * gamma * c.a_eff;
  if (std::abs(c.A) > 1.0) throw DomainError("A out of range");
  c.cos_theta = contact_cosine(c.A);
  if (std::abs(c.cos_theta) > 1.0) throw DomainError("no equilibrium angle");
  c.theta = std::acos(c.cos_theta);
  return c;
}

}  // namespace chp
