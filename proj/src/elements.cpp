#include "f2bp/elements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace f2bp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double angle) {
  angle = std::fmod(angle, kTwoPi);
  return angle < 0.0 ? angle + kTwoPi : angle;
}

// Angle from u to v measured about n, in [0, 2pi).
double signed_angle(const Vec3& u, const Vec3& v, const Vec3& n) {
  return wrap(std::atan2(n.dot(u.cross(v)), u.dot(v)));
}

}  // namespace

std::pair<Vec3, Vec3> elements_to_state(const OrbitalElements& el, double mu) {
  if (!(mu > 0.0)) throw ConfigError("gravitational parameter must be positive");
  if (el.e < 0.0) throw ConfigError("eccentricity must be non-negative");
  if (std::abs(el.e - 1.0) < 1e-14) {
    throw ConfigError("parabolic orbits cannot be given by semi-major axis");
  }
  if ((el.e < 1.0 && !(el.a > 0.0)) || (el.e > 1.0 && !(el.a < 0.0))) {
    throw ConfigError("semi-major axis sign does not match the eccentricity");
  }
  const double p = el.a * (1.0 - el.e * el.e);
  const double denom = 1.0 + el.e * std::cos(el.nu);
  if (!(denom > 0.0)) throw ConfigError("true anomaly lies outside the hyperbola's range");
  const double r = p / denom;

  const Vec3 pos_pf(r * std::cos(el.nu), r * std::sin(el.nu), 0.0);
  const double k = std::sqrt(mu / p);
  const Vec3 vel_pf(-k * std::sin(el.nu), k * (el.e + std::cos(el.nu)), 0.0);

  const Mat3 q = (Eigen::AngleAxisd(el.node, Vec3::UnitZ()) *
                  Eigen::AngleAxisd(el.i, Vec3::UnitX()) *
                  Eigen::AngleAxisd(el.argp, Vec3::UnitZ()))
                     .toRotationMatrix();
  return {q * pos_pf, q * vel_pf};
}

OrbitalElements osculating_elements(const Vec3& X, const Vec3& V, double mu) {
  const double r = X.norm();
  if (!(r > 0.0)) throw SingularConfigurationError("zero separation");
  const Vec3 h = X.cross(V);
  const double hn = h.norm();
  if (hn <= 1e-14 * r * V.norm()) throw ConfigError("rectilinear state has no orbital plane");

  const Vec3 e_vec = V.cross(h) / mu - X / r;
  OrbitalElements el;
  el.e = e_vec.norm();
  const double energy = 0.5 * V.squaredNorm() - mu / r;
  el.a = -mu / (2.0 * energy);
  const Vec3 w = h / hn;
  el.i = std::acos(std::clamp(w.z(), -1.0, 1.0));

  Vec3 node_vec = Vec3::UnitZ().cross(h);
  const bool equatorial = node_vec.norm() <= 1e-14 * hn;
  if (equatorial) {
    el.node = 0.0;
    node_vec = Vec3::UnitX();
  } else {
    node_vec.normalize();
    el.node = wrap(std::atan2(node_vec.y(), node_vec.x()));
  }
  // Equatorial retrograde orbits measure angles about -z, matching w.
  if (el.e <= 1e-14) {
    el.argp = 0.0;
    el.nu = signed_angle(node_vec, X, w);
  } else {
    el.argp = signed_angle(node_vec, e_vec, w);
    el.nu = signed_angle(e_vec, X, w);
  }
  return el;
}

}  // namespace f2bp
