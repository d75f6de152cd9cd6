#pragma once

#include "f2bp/body_model.hpp"
#include "f2bp/common.hpp"
#include "f2bp/config.hpp"
#include "f2bp/dynamics.hpp"
#include "f2bp/mutual_potential.hpp"
#include "f2bp/q_tensors.hpp"
#include "f2bp/rotation.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/rational.hpp>

#include <filesystem>
#include <random>

namespace f2bp::test {

inline std::filesystem::path source_dir() { return F2BP_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path scenario_file(int n) {
  return source_dir() / "scenarios" / ("scenario" + std::to_string(n) + ".cfg");
}

inline PolyhedralBody load_data_body(const char* stem) {
  return build_body(load_body_model(data_dir() / (std::string(stem) + ".vert"),
                                    data_dir() / (std::string(stem) + ".face"), 2500.0));
}

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

inline Rational binomial(int n, int k) {
  return Rational(static_cast<std::int64_t>(boost::math::binomial_coefficient<double>(n, k)));
}

/// Iterated integral of x^a y^b z^c over {x, y, z >= 0, x + y + z <= 1}, expanding
/// each inner bound (1 - x - y) binomially. Exact in rationals.
inline Rational simplex_monomial_integral(int a, int b, int c) {
  Rational total = 0;
  const int n = b + c + 2;
  for (int k = 0; k <= c + 1; ++k) {
    const Rational inner = binomial(c + 1, k) * (k % 2 ? -1 : 1) / Rational(b + k + 1) / Rational(c + 1);
    Rational outer = 0;  // int_0^1 x^a (1 - x)^n dx
    for (int j = 0; j <= n; ++j) outer += binomial(n, j) * (j % 2 ? -1 : 1) / Rational(a + j + 1);
    total += inner * outer;
  }
  return total;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

template <class Derived>
double rel_diff(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  const double s = std::max(a.norm(), b.norm());
  return s == 0.0 ? 0.0 : (a - b).norm() / s;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

/// Uniform on SO(3) via a normalized Gaussian quaternion.
inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

/// The two octahedra of the scenarios with a gravity model of the given order.
inline SystemModel octahedra_model(int order, double G = 6.674e-11, double contact_factor = 1.05) {
  const QTensorSet q = compute_q_tensors(order);
  MutualGravity gravity(load_data_body("b1"), load_data_body("b2"), G, q, order);
  return SystemModel(std::move(gravity), contact_factor);
}

}  // namespace f2bp::test
