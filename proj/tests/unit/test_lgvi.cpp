#include "test_support.hpp"

#include "f2bp/lgvi.hpp"

#include <doctest.h>

using namespace f2bp;
using f2bp::test::rel_diff;

namespace {

Mat3 skew_residual(const Mat3& F, const Mat3& Jd, const Vec3& g, double h) {
  return F * Jd - Jd * F.transpose() - h * hat(g);
}

RelativeState near_orbit(std::mt19937_64& rng) {
  RelativeState s;
  s.X = Vec3(0.3, 4.0, 0.2);
  s.V = Vec3(-2.6e-4, 0.1e-4, 0.2e-4);
  s.R = test::random_rotation(rng);
  s.Omega = 3e-4 * test::random_unit(rng);
  s.Omega2 = 1e-4 * test::random_unit(rng);
  return s;
}

}  // namespace

TEST_SUITE("lgvi") {

TEST_CASE("zero momentum gives the identity rotation") {
  const Mat3 Jd = Vec3(2.0, 3.0, 4.0).asDiagonal();
  const auto sol = solve_implicit_rotation(Vec3::Zero(), Jd, 1.0);
  CHECK(sol.F == Mat3::Identity());
  CHECK(sol.report.iterations == 0);
}

TEST_CASE("principal-axis momentum has the arcsine solution") {
  // J_d = diag(2, 3, 4) gives J = diag(7, 6, 5); h g along z solves sin(t) 5 = h g.
  const Mat3 Jd = Vec3(2.0, 3.0, 4.0).asDiagonal();
  for (double hg : {1e-9, 1e-3, 0.7, 3.0, 4.9}) {
    const auto sol = solve_implicit_rotation(Vec3(0.0, 0.0, hg), Jd, 1.0);
    const double t = std::asin(hg / 5.0);
    CHECK((sol.report.f - Vec3(0.0, 0.0, t)).norm() < 1e-15 * std::max(1.0, t));
    CHECK(sol.report.iterations <= 1);
  }
  // Beyond sin(t) = 1 there is no rotation that carries the momentum.
  CHECK_THROWS_AS(solve_implicit_rotation(Vec3(0.0, 0.0, 5.5), Jd, 1.0), ConvergenceError);
}

TEST_CASE("general momentum satisfies the implicit relation") {
  std::mt19937_64 rng(5);
  const PolyhedralBody b2 = test::load_data_body("b2");
  for (NewtonStart start : {NewtonStart::Linear, NewtonStart::Arcsine}) {
    for (int k = 0; k < 50; ++k) {
      const Mat3 Q = test::random_rotation(rng);
      const Mat3 Jd = Q * b2.inertia_nonstandard * Q.transpose();
      const Vec3 g = (k % 5 + 1) * 100.0 * test::random_unit(rng);
      const auto sol = solve_implicit_rotation(g, Jd, 0.5, {1e-15, 20, start});
      const double scale = std::max(1.0, Jd.norm());
      CHECK(skew_residual(sol.F, Jd, g, 0.5).norm() / scale <= 1e-13);
      CHECK(sol.report.residual <= 1e-13);
      CHECK(sol.report.iterations <= 5);
      CHECK(orthogonality_error(sol.F) < 1e-15);
    }
  }
}

TEST_CASE("one step is exactly one gradient evaluation") {
  const SystemModel model = test::octahedra_model(3);
  std::mt19937_64 rng(6);
  const RelativeState s = near_orbit(rng);
  const auto g = model.gradients(s.X, s.R);
  model.gravity.reset_counters();
  const auto step = lgvi_step(s, g, model, 10.0);
  CHECK(model.gravity.evaluation_count() == 1);
  const auto direct = model.gradients(step.next.X, step.next.R);
  CHECK(step.grads_next.U == direct.U);
}

TEST_CASE("stepping back with -h retraces the step") {
  const SystemModel model = test::octahedra_model(4);
  std::mt19937_64 rng(7);
  const RelativeState s = near_orbit(rng);
  const auto g = model.gradients(s.X, s.R);
  const auto fwd = lgvi_step(s, g, model, 20.0);
  const auto back = lgvi_step(fwd.next, fwd.grads_next, model, -20.0);
  CHECK((back.next.X - s.X).norm() < 1e-14 * s.X.norm());
  CHECK((back.next.V - s.V).norm() < 1e-12 * s.V.norm());
  CHECK((back.next.R - s.R).norm() < 1e-14);
  CHECK((back.next.Omega - s.Omega).norm() < 1e-12 * s.Omega.norm());
  CHECK((back.next.Omega2 - s.Omega2).norm() < 1e-12 * s.Omega2.norm());
}

TEST_CASE("small steps follow the continuous equations") {
  const SystemModel model = test::octahedra_model(4);
  std::mt19937_64 rng(8);
  const RelativeState s = near_orbit(rng);
  const auto g = model.gradients(s.X, s.R);
  const auto d = eom_rhs(s, g, model);
  double prev = 0.0;
  for (double h : {4.0, 2.0, 1.0}) {
    const auto step = lgvi_step(s, g, model, h);
    // Two-sided difference quotients against the midpoint rate are second order.
    const Vec3 dx = (step.next.X - s.X) / h;
    const double err = (dx - d.X).norm() / d.X.norm();
    if (prev > 0.0) CHECK(err < 0.6 * prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("free bodies move uniformly with constant momenta") {
  const SystemModel model = test::octahedra_model(2, 0.0);
  RelativeState s;
  s.X = Vec3(5.0, 0.0, 0.0);
  s.V = Vec3(0.0, 1e-3, 2e-4);
  s.Omega = Vec3(1e-2, 2e-2, 3e-1);
  s.R = euler313_to_rotation(10, 20, 30);
  auto g = model.gradients(s.X, s.R);
  const Vec3 gamma0 = body1_momentum(s, model);
  const double ke0 = kinetic_energy(s, model);
  double max_dke = 0.0;
  for (int n = 0; n < 2000; ++n) {
    const auto step = lgvi_step(s, g, model, 0.5);
    s = step.next;
    g = step.grads_next;
    max_dke = std::max(max_dke, std::abs(kinetic_energy(s, model) - ke0));
  }
  CHECK((s.X - Vec3(5.0, 1.0, 0.2)).norm() < 1e-12);
  CHECK((body1_momentum(s, model) - gamma0).norm() < 1e-13 * gamma0.norm());
  CHECK(s.Omega2.norm() == 0.0);
  CHECK(max_dke < 1e-3 * ke0);
  CHECK(orthogonality_error(s.R) < 1e-13);
}

TEST_CASE("body-2 reconstruction conserves linear momentum, the relative frame does not") {
  const SystemModel model = test::octahedra_model(4);
  std::mt19937_64 rng(9);
  const RelativeState s0 = near_orbit(rng);
  const Mat3 R2 = test::random_rotation(rng);
  for (auto frame : {ReconstructionFrame::Body2, ReconstructionFrame::Relative}) {
    RelativeState s = s0;
    InertialState in = init_inertial(s, R2, model);
    auto g = model.gradients(s.X, s.R);
    double drift = 0.0;
    for (int n = 0; n < 200; ++n) {
      const auto step = lgvi_step(s, g, model, 10.0);
      in = reconstruct_inertial_step(in, s, step, g, model, 10.0, frame);
      s = step.next;
      g = step.grads_next;
      drift = std::max(drift, (model.m1 * in.v1 + model.m2 * in.v2).norm());
      CHECK(relative_consistency_error(in, s) < 1e-12);
    }
    const double scale = model.m * s0.V.norm();
    if (frame == ReconstructionFrame::Body2) CHECK(drift < 1e-14 * scale);
    else CHECK(drift > 1e-6 * scale);
  }
}

TEST_CASE("contact aborts the step") {
  const SystemModel model = test::octahedra_model(2);
  RelativeState s;
  s.X = Vec3(2.7, 0.0, 0.0);
  s.V = Vec3(-0.1, 0.0, 0.0);
  const auto g = model.gradients(s.X, s.R);
  CHECK_THROWS_AS(lgvi_step(s, g, model, 1.0), ContactError);
}

}  // TEST_SUITE
