#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chp/cell_geometry.hpp"

namespace chp {

/// Wetting parameters. `a` holds constant coefficients per wall class;
/// `a_fields` (optional) holds one macro field per class for the porous case.
struct WettingSpec {
  double gamma = 0.0;  // 2 sqrt(2) phi_e / (3 sigma_lg), supplied by the user
  double cahn = 1.0;   // C_h = lambda / L
  std::vector<double> a;
  std::vector<std::vector<double>> a_fields;
  double phi_e = 1.0;
};

/// g = -(gamma / C_h) a_i for wall class i (1-based).
double robin_g(const WettingSpec& spec, int wall_class);
/// Same with the field value a_i(x) at macro node `node`.
double robin_g(const WettingSpec& spec, int wall_class, std::size_t node);

/// One wall class on an interval of the along-wall coordinate y1.
struct WallInterval {
  int label = 1;
  double lo = 0.0;
  double hi = 1.0;
};

/// The wall portion of a channel cell: the face y2 = 0 of the unit cell,
/// resolved by n faces per unit length along each wall direction; a face takes
/// the class of the first interval containing its y1 centre (class 1 otherwise).
struct ChannelWall {
  int dim = 2;
  int n = 64;
  std::vector<WallInterval> classes;
};

/// Staircase measures of classes 1..N on the channel wall (unit total).
std::vector<double> channel_class_measures(const ChannelWall& wall);

/// g0 = -(gamma / C_h) (1/|Y|) sum_i a_i |w_i|, |Y| = 1. Throws GeometryError when
/// a class with a coefficient has no measure entry or the measures are all zero.
double upscaled_g0_channel(std::span<const double> class_measures, const WettingSpec& spec);
double upscaled_g0_channel(const ChannelWall& wall, const WettingSpec& spec);

/// g~0(x) = -(gamma / C_h) sum_i a_i(x) |dY1_{w_i}| per macro node (constant
/// coefficients give a single-valued field of length `nodes`). With `normalize`
/// the surface integral is divided by |Y| = 1.
std::vector<double> upscaled_g_tilde(const ReferenceCell& cell, const WettingSpec& spec, std::size_t nodes,
                                     bool normalize = false);

/// alpha(x) = -(gamma / C_h) (a1 theta_w1(x) + a2 (1 - theta_w1(x))).
/// Throws ParameterError for fractions outside [0, 1].
std::vector<double> alpha_field(std::span<const double> theta_w1, double a1, double a2, double gamma, double cahn);

struct ContactAngle {
  double a_eff = 0.0;
  double A = 0.0;
  double cos_theta = 0.0;
  double theta = 0.0;  // radians
};

/// cos theta = ((1 + A)^{3/2} - (1 - A)^{3/2}) / 2 with A = sqrt(2) gamma a_eff,
/// a_eff = g0 C_h / gamma. Throws DomainError("A out of range") for |A| > 1 and
/// DomainError("no equilibrium angle") when |cos theta| > 1.
ContactAngle effective_contact_angle(double g0, double gamma, double cahn);

/// cos theta as a function of A (no range checks beyond |A| <= 1).
double contact_cosine(double A);

}  // namespace chp
