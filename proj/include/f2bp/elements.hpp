#pragma once

#include "f2bp/common.hpp"

#include <utility>

namespace f2bp {

/// Keplerian elements; angles in radians. a < 0 with e > 1 for hyperbolas.
struct OrbitalElements {
  double a = 0.0;
  double e = 0.0;
  double i = 0.0;
  double node = 0.0;  ///< longitude of the ascending node
  double argp = 0.0;  ///< argument of periapsis
  double nu = 0.0;    ///< true anomaly
};

/// Position and velocity of the relative two-body orbit.
std::pair<Vec3, Vec3> elements_to_state(const OrbitalElements& el, double mu);

/// Osculating elements of (X, V). Circular and equatorial orbits fold the
/// undefined angles into the remaining ones (node = 0, argp = 0).
OrbitalElements osculating_elements(const Vec3& X, const Vec3& V, double mu);

}  // namespace f2bp
