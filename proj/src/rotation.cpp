#include "f2bp/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace f2bp {
namespace {

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

}  // namespace

Mat3 euler313_to_rotation(double phi1_deg, double phi2_deg, double phi3_deg) {
  constexpr double d2r = std::numbers::pi / 180.0;
  return rot_z(phi1_deg * d2r) * rot_x(phi2_deg * d2r) * rot_z(phi3_deg * d2r);
}

Mat3 rotation_exp(const Vec3& f) {
  const double theta = f.norm();
  const Mat3 s = hat(f);
  if (theta < 1e-8) {
    // Series to second order; the dropped terms are below round-off here.
    return Mat3::Identity() + s + 0.5 * s * s;
  }
  const double half = std::sin(0.5 * theta) / theta;
  return Mat3::Identity() + (std::sin(theta) / theta) * s + 2.0 * half * half * s * s;
}

Vec3 rotation_log(const Mat3& r) {
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  const double theta = std::acos(c);
  const Vec3 axis_sin = vee(r);  // sin(theta) * axis
  if (theta < 1e-6) return axis_sin;
  if (std::numbers::pi - theta > 1e-6) return axis_sin * (theta / std::sin(theta));
  // Near pi: pull the axis out of the symmetric part.
  const Mat3 b = 0.5 * (r + Mat3::Identity());
  int k = 0;
  b.diagonal().maxCoeff(&k);
  Vec3 axis = b.col(k) / std::sqrt(std::max(b(k, k), 0.0));
  axis.normalize();
  if (axis.dot(axis_sin) < 0.0) axis = -axis;
  return theta * axis;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  return rotation_log(a.transpose() * b).norm();
}

}  // namespace f2bp
