#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace f2bp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Skew matrix with hat(x) * y == x.cross(y).
inline Mat3 hat(const Vec3& x) {
  Mat3 s;
  s << 0.0, -x.z(), x.y(),
       x.z(), 0.0, -x.x(),
       -x.y(), x.x(), 0.0;
  return s;
}

/// Inverse of hat() applied to the skew part of s.
inline Vec3 vee(const Mat3& s) {
  return 0.5 * Vec3(s(2, 1) - s(1, 2), s(0, 2) - s(2, 0), s(1, 0) - s(0, 1));
}

/// ||I - R^T R||_F
inline double orthogonality_error(const Mat3& r) {
  return (Mat3::Identity() - r.transpose() * r).norm();
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is one-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class DegenerateBodyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Zero separation between body centroids.
class SingularConfigurationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Bodies closer than the integrator's contact bound.
class ContactError : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace f2bp
