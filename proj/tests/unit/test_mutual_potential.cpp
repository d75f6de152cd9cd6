#include "test_support.hpp"

#include <doctest.h>

#include <numeric>
#include <sstream>

using namespace f2bp;
using f2bp::test::rel_diff;

namespace {

// Dense Q tensors through rank 3, every index tuple spelled out.
struct DenseQ {
  double q0;
  double q1[6];
  double q2[6][6];
  double q3[6][6][6];

  explicit DenseQ(const QTensorSet& q) {
    q0 = test::to_double(q.entry(std::vector<int>{}));
    for (int i = 0; i < 6; ++i) {
      q1[i] = test::to_double(q.entry(std::vector<int>{i}));
      for (int j = 0; j < 6; ++j) {
        q2[i][j] = test::to_double(q.entry(std::vector<int>{i, j}));
        for (int k = 0; k < 6; ++k) q3[i][j][k] = test::to_double(q.entry(std::vector<int>{i, j, k}));
      }
    }
  }
};

// Low-order brackets of the pair expansion written out term by term, with
// their X gradients and the gradient with respect to each column v^l.
struct Brackets {
  double U[4] = {};
  Vec3 dX[4];
  Mat3 dR[4];
};

Brackets explicit_brackets(const DenseQ& Q, const Vec3& X, const Mat3& R, const Mat3& a_corners,
                           const Mat3& b_corners) {
  Eigen::Matrix<double, 3, 6> v;
  v.leftCols<3>() = R * a_corners;
  v.rightCols<3>() = -b_corners;
  const Eigen::Matrix<double, 6, 1> w = v.transpose() * X;
  const Eigen::Matrix<double, 6, 6> rr = v.transpose() * v;
  const double r = X.norm();
  const double r3 = r * r * r, r5 = r3 * r * r, r7 = r5 * r * r, r9 = r7 * r * r;

  Brackets out;
  for (auto& d : out.dX) d.setZero();
  // dv[n].col(l) = dU_n / dv^l
  Eigen::Matrix<double, 3, 6> dv[4];
  for (auto& d : dv) d.setZero();

  out.U[0] = Q.q0 / r;
  out.dX[0] = -Q.q0 * X / r3;

  for (int i = 0; i < 6; ++i) {
    out.U[1] += -Q.q1[i] * w(i) / r3;
    out.dX[1] += 3.0 * Q.q1[i] * w(i) * X / r5 - Q.q1[i] * v.col(i) / r3;
    dv[1].col(i) += -Q.q1[i] * X / r3;
  }

  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double q = Q.q2[i][j];
      out.U[2] += -q * rr(i, j) / (2 * r3) + 3 * q * w(i) * w(j) / (2 * r5);
      out.dX[2] += 3 * q * rr(i, j) * X / (2 * r5) - 15 * q * w(i) * w(j) * X / (2 * r7) +
                   3 * q * w(i) * v.col(j) / r5;
      dv[2].col(i) += -q * v.col(j) / r3 + 3 * q * w(j) * X / r5;
    }
  }

  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      for (int k = 0; k < 6; ++k) {
        const double q = Q.q3[i][j][k];
        out.U[3] += 3 * q * rr(i, j) * w(k) / (2 * r5) - 5 * q * w(i) * w(j) * w(k) / (2 * r7);
        out.dX[3] += -15 * q * rr(i, j) * w(k) * X / (2 * r7) + 3 * q * rr(i, j) * v.col(k) / (2 * r5) +
                     35 * q * w(i) * w(j) * w(k) * X / (2 * r9) -
                     15 * q * w(i) * w(j) * v.col(k) / (2 * r7);
        dv[3].col(i) += 3 * q / (2 * r5) * (2 * v.col(j) * w(k)) -
                        15 * q * w(j) * w(k) * X / (2 * r7);
        dv[3].col(k) += 3 * q / (2 * r5) * rr(i, j) * X;
      }
    }
  }

  // Only the body-1 columns depend on R: dv^l / dR_{pq} = delta_{p.} a^l_q.
  for (int n = 0; n < 4; ++n) {
    out.dR[n].setZero();
    for (int l = 0; l < 3; ++l) out.dR[n] += dv[n].col(l) * a_corners.col(l).transpose();
  }
  return out;
}

struct Fixture {
  PolyhedralBody b1 = test::load_data_body("b1");
  PolyhedralBody b2 = test::load_data_body("b2");
  QTensorSet q = compute_q_tensors(6);
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("mutual_potential") {

TEST_CASE_FIXTURE(Fixture, "pair kernel matches the explicit low-order brackets") {
  const MutualGravity gravity(b1, b2, 1.0, q, 3);
  const DenseQ dense(q);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 6; ++trial) {
    const Vec3 X = (3.0 + trial) * test::random_unit(rng);
    const Mat3 R = test::random_rotation(rng);
    for (std::size_t a : {0u, 3u, 7u}) {
      for (std::size_t b : {1u, 4u, 6u}) {
        const PairTerms p = gravity.pair_terms(a, b, X, R);
        const Brackets e = explicit_brackets(dense, X, R, b1.simplices[a].vertices, b2.simplices[b].vertices);
        for (int n = 0; n <= 3; ++n) {
          CAPTURE(n);
          CHECK(std::abs(p.U[n] - e.U[n]) <= 1e-13 * std::abs(e.U[0]) / std::pow(X.norm(), n) + 1e-13 * std::abs(e.U[n]));
          CHECK(rel_diff(p.dUdX[n], e.dX[n]) < 1e-13);
          if (n > 0) CHECK(rel_diff(p.dUdR[n], e.dR[n]) < 1e-13);
        }
        CHECK(p.dUdR[0].isZero(0.0));
      }
    }
  }
}

TEST_CASE_FIXTURE(Fixture, "pair kernel matches the direct Q contraction to order 6") {
  const MutualGravity gravity(b1, b2, 1.0, q, 6);
  std::mt19937_64 rng(5);
  const Vec3 X = 4.0 * test::random_unit(rng);
  const Mat3 R = test::random_rotation(rng);
  for (std::size_t a = 0; a < b1.simplices.size(); a += 3) {
    for (std::size_t b = 0; b < b2.simplices.size(); b += 2) {
      const auto g = assemble_pair_geometry(X, R, b1.simplices[a].vertices, b2.simplices[b].vertices);
      const auto direct = series_terms(g, q, 6);
      const auto kernel = gravity.pair_terms(a, b, X, R).U;
      for (int n = 0; n <= 6; ++n) CHECK(std::abs(direct[n] - kernel[n]) < 1e-14 * max_abs(direct));
    }
  }
}

TEST_CASE("pair geometry identities") {
  std::mt19937_64 rng(9);
  const Vec3 X(1.0, -2.0, 0.5);
  const Mat3 R = test::random_rotation(rng);
  const Mat3 a = Mat3::Random();
  const Mat3 b = Mat3::Random();
  const PairGeometry g = assemble_pair_geometry(X, R, a, b);
  CHECK(g.r == doctest::Approx(X.norm()));
  // X + v s is the separation of the points R a s1 and b s2.
  const Eigen::Matrix<double, 6, 1> s = Eigen::Matrix<double, 6, 1>::Random();
  const Vec3 d = X + R * a * s.head<3>() - b * s.tail<3>();
  CHECK(((X + g.v * s) - d).norm() < 1e-14);
  CHECK(std::abs(d.squaredNorm() - (g.r * g.r + 2 * g.w.dot(s) + s.dot(g.rmat * s))) < 1e-13);
  CHECK_THROWS_AS(assemble_pair_geometry(Vec3::Zero(), R, a, b), SingularConfigurationError);
}

TEST_CASE_FIXTURE(Fixture, "order zero is the point-mass potential") {
  const double G = 6.674e-11;
  const MutualGravity gravity(b1, b2, G, q, 0);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k) {
    const Vec3 X = (2.0 + k) * test::random_unit(rng);
    const auto g = gravity.evaluate(X, test::random_rotation(rng));
    const double r = X.norm();
    CHECK(rel_diff(g.U, -G * b1.mass * b2.mass / r) < 1e-14);
    CHECK(rel_diff(g.dUdX, Vec3(G * b1.mass * b2.mass * X / (r * r * r))) < 1e-14);
    CHECK(g.M.norm() == 0.0);
  }
}

TEST_CASE_FIXTURE(Fixture, "potential agrees with a Monte Carlo volume integral") {
  // Two octahedra well apart; the order-6 series error is far below the sampling noise.
  const MutualGravity gravity(b1, b2, 1.0, q, 6);
  std::mt19937_64 rng(17);
  const Mat3 R = test::random_rotation(rng);
  const Vec3 X = Vec3(3.0, 2.0, -1.5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto sample = [&](double a, double b, double c) {
    for (;;) {
      const Vec3 p(a * u(rng), b * u(rng), c * u(rng));
      if (std::abs(p.x()) / a + std::abs(p.y()) / b + std::abs(p.z()) / c <= 1.0) return p;
    }
  };
  const int n = 400000;
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec3 p1 = sample(1.0, std::exp(-1.0), 1.0 / std::numbers::pi);
    const Vec3 p2 = sample(1.0, 1.5, 0.9);
    const double f = 1.0 / (X + R * p1 - p2).norm();
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / n;
  const double sigma = std::sqrt((sum2 / n - mean * mean) / n);
  const double mm = b1.mass * b2.mass;
  const double U = gravity.evaluate(X, R).U;
  CHECK(std::abs(U + mm * mean) < 3.0 * mm * sigma);
}

TEST_CASE_FIXTURE(Fixture, "gradients agree with finite differences") {
  const MutualGravity gravity(b1, b2, 1.0, q, 4);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 5; ++k) {
    const Vec3 X = (3.0 + k) * test::random_unit(rng);
    const Mat3 R = test::random_rotation(rng);
    const auto g = gravity.evaluate(X, R);
    const double eps = 1e-5 * X.norm();
    Vec3 fd;
    for (int i = 0; i < 3; ++i) {
      const Vec3 e = eps * Vec3::Unit(i);
      fd[i] = (gravity.evaluate(X + e, R).U - gravity.evaluate(X - e, R).U) / (2 * eps);
    }
    CHECK(rel_diff(fd, g.dUdX) < 1e-7);
    // d/de U(exp(e S(eta)) R) = eta . M
    for (int i = 0; i < 3; ++i) {
      const Vec3 eta = Vec3::Unit(i);
      const double h = 1e-5;
      const double d = (gravity.evaluate(X, rotation_exp(h * eta) * R).U -
                        gravity.evaluate(X, rotation_exp(-h * eta) * R).U) / (2 * h);
      CHECK(std::abs(d - g.M[i]) < 1e-6 * g.M.norm());
    }
    // Entry-wise R derivative of the matrix argument itself.
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        Mat3 dr = Mat3::Zero();
        dr(i, j) = 1e-6;
        const double d = (gravity.evaluate(X, R + dr).U - gravity.evaluate(X, R - dr).U) / 2e-6;
        CHECK(std::abs(d - g.dUdR(i, j)) < 1e-7 * g.dUdR.norm() + 1e-9 * std::abs(g.U));
      }
    }
  }
}

TEST_CASE_FIXTURE(Fixture, "moment is the vee of the skew part") {
  const Mat3 dUdR = Mat3::Random();
  std::mt19937_64 rng(2);
  const Mat3 R = test::random_rotation(rng);
  const Vec3 m = moment(dUdR, R);
  CHECK((hat(m) - (dUdR * R.transpose() - R * dUdR.transpose())).norm() < 1e-14);
  Vec3 cols = Vec3::Zero();
  for (int c = 0; c < 3; ++c) cols += R.col(c).cross(dUdR.col(c));
  CHECK((m - cols).norm() < 1e-14);
}

TEST_CASE_FIXTURE(Fixture, "swapping the bodies gives the same potential") {
  const MutualGravity forward(b1, b2, 1.0, q, 5);
  const MutualGravity swapped(b2, b1, 1.0, q, 5);
  std::mt19937_64 rng(31);
  for (int k = 0; k < 4; ++k) {
    const Vec3 X = 3.5 * test::random_unit(rng);
    const Mat3 R = test::random_rotation(rng);
    const auto f = forward.evaluate(X, R);
    const auto s = swapped.evaluate(-R.transpose() * X, R.transpose());
    CHECK(rel_diff(f.U, s.U) < 1e-13);
    CHECK(rel_diff(Vec3(-R.transpose() * f.dUdX), s.dUdX) < 1e-12);
  }
}

TEST_CASE_FIXTURE(Fixture, "symmetric placement exerts no torque") {
  const MutualGravity gravity(b1, b2, 1.0, q, 6);
  for (int axis = 0; axis < 3; ++axis) {
    const auto g = gravity.evaluate(3.0 * Vec3::Unit(axis), Mat3::Identity());
    CHECK(g.M.norm() < 1e-13 * std::abs(g.U));
    CHECK(g.dUdX.cross(Vec3::Unit(axis)).norm() < 1e-13 * g.dUdX.norm());
  }
}

TEST_CASE_FIXTURE(Fixture, "series terms decay with order outside the bounding spheres") {
  std::mt19937_64 rng(8);
  const Vec3 X = 4.0 * test::random_unit(rng);
  const Mat3 R = test::random_rotation(rng);
  std::vector<double> u(7, 0.0);
  for (std::size_t a = 0; a < b1.simplices.size(); ++a) {
    for (std::size_t b = 0; b < b2.simplices.size(); ++b) {
      const auto g = assemble_pair_geometry(X, R, b1.simplices[a].vertices, b2.simplices[b].vertices);
      const auto t = series_terms(g, q, 6);
      const double w = b1.simplices[a].density * b1.simplices[a].jacobian * b2.simplices[b].density *
                       b2.simplices[b].jacobian;
      for (int n = 0; n <= 6; ++n) u[n] += w * t[n];
    }
  }
  const MutualGravity g4(b1, b2, 1.0, q, 4);
  CHECK(rel_diff(-std::accumulate(u.begin(), u.begin() + 5, 0.0), g4.evaluate(X, R).U) < 1e-13);
  // Odd terms cancel for centrally symmetric bodies; even terms shrink.
  CHECK(std::abs(u[2]) < 0.1 * std::abs(u[0]));
  CHECK(std::abs(u[4]) < 0.1 * std::abs(u[2]));
  CHECK(std::abs(u[6]) < 0.1 * std::abs(u[4]));
  CHECK(std::abs(u[1]) < 1e-12 * std::abs(u[0]));
  CHECK(std::abs(u[3]) < 1e-12 * std::abs(u[0]));
}

TEST_CASE_FIXTURE(Fixture, "deterministic reduction is bit-identical across threads and orderings") {
  std::mt19937_64 rng(13);
  const Vec3 X = 3.0 * test::random_unit(rng);
  const Mat3 R = test::random_rotation(rng);
  const MutualGravity base(b1, b2, 1.0, q, 4);
  const auto ref = base.evaluate(X, R);
  std::vector<int> perm(b2.simplices.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (int threads : {1, 2, 4, 0}) {
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      std::shuffle(perm.begin(), perm.end(), rng);
      const MutualGravity g(b1, b2, 1.0, q, 4, EvalOptions{Reduction::Deterministic, threads, perm});
      const auto out = g.evaluate(X, R);
      CHECK(out.U == ref.U);
      CHECK(out.dUdX == ref.dUdX);
      CHECK(out.dUdR == ref.dUdR);
    }
  }
  const MutualGravity unordered(b1, b2, 1.0, q, 4, EvalOptions{Reduction::Unordered, 4, {}});
  const auto u = unordered.evaluate(X, R);
  CHECK(rel_diff(u.U, ref.U) < 1e-14);
  CHECK(rel_diff(u.dUdR, ref.dUdR) < 1e-13);
  CHECK_THROWS_AS(MutualGravity(b1, b2, 1.0, q, 4, EvalOptions{Reduction::Deterministic, 1, {0, 0, 1}}),
                  ConfigError);
}

TEST_CASE_FIXTURE(Fixture, "evaluation counter and convergence warnings") {
  const MutualGravity gravity(b1, b2, 1.0, q, 2);
  CHECK(gravity.evaluation_count() == 0);
  gravity.evaluate(Vec3(5, 0, 0), Mat3::Identity());
  gravity.evaluate(Vec3(0, 4, 0), Mat3::Identity());
  gravity.pair_terms(0, 0, Vec3(5, 0, 0), Mat3::Identity());
  CHECK(gravity.evaluation_count() == 2);
  CHECK(gravity.warning_count() == 0);
  const auto close = gravity.evaluate(Vec3(1.5, 0, 0), Mat3::Identity());
  CHECK(close.outside_convergence_region);
  CHECK(gravity.warning_count() == 1);
  CHECK(gravity.convergence_radius() == doctest::Approx(2.5));
  gravity.reset_counters();
  CHECK(gravity.evaluation_count() == 0);
  CHECK_THROWS_AS(gravity.evaluate(Vec3::Zero(), Mat3::Identity()), SingularConfigurationError);
  CHECK_THROWS_AS(MutualGravity(b1, b2, 1.0, q, 7), ConfigError);
}

TEST_CASE_FIXTURE(Fixture, "pair CSV rows sum to the full evaluation") {
  const MutualGravity gravity(b1, b2, 2.0, q, 3);
  const Vec3 X(2.0, 3.0, -1.0);
  std::mt19937_64 rng(4);
  const Mat3 R = test::random_rotation(rng);
  std::stringstream ss;
  gravity.write_pair_csv(ss, X, R);
  std::string line;
  std::getline(ss, line);
  CHECK(line.rfind("a,b,weight,U,dUdX_x", 0) == 0);
  double U = 0.0;
  int rows = 0;
  while (std::getline(ss, line)) {
    std::stringstream ls(line);
    std::string field;
    for (int c = 0; c < 4; ++c) std::getline(ls, field, ',');
    U += std::stod(field);
    ++rows;
  }
  CHECK(rows == 64);
  CHECK(rel_diff(U, gravity.evaluate(X, R).U) < 1e-14);
}

TEST_CASE_FIXTURE(Fixture, "free functions wrap a single evaluation") {
  const Vec3 X(0.0, 3.0, 1.0);
  const Mat3 R = Mat3::Identity();
  const auto g = MutualGravity(b1, b2, 1.0, q, 4).evaluate(X, R);
  CHECK(potential(X, R, b1, b2, 1.0, q, 4) == g.U);
  CHECK(force_gradient(X, R, b1, b2, 1.0, q, 4) == g.dUdX);
  CHECK(attitude_gradient(X, R, b1, b2, 1.0, q, 4) == g.dUdR);
}

}  // TEST_SUITE
