#pragma once

#include "f2bp/common.hpp"

namespace f2bp {

/// Rz(phi1) * Rx(phi2) * Rz(phi3), angles in degrees.
Mat3 euler313_to_rotation(double phi1_deg, double phi2_deg, double phi3_deg);

/// exp(hat(f)) by the Rodrigues formula.
Mat3 rotation_exp(const Vec3& f);

/// Rotation vector f with exp(hat(f)) = r, |f| in [0, pi].
Vec3 rotation_log(const Mat3& r);

/// Angle of the relative rotation a^T b.
double rotation_angle_between(const Mat3& a, const Mat3& b);

}  // namespace f2bp
