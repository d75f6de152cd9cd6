#include "f2bp/lgvi.hpp"

#include "f2bp/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace f2bp {
namespace {

struct RodriguesCoefficients {
  double a;   // sin t / t
  double b;   // (1 - cos t) / t^2
  double da;  // (d a / d t) / t
  double db;  // (d b / d t) / t
};

RodriguesCoefficients rodrigues_coefficients(double t) {
  RodriguesCoefficients c;
  const double t2 = t * t;
  if (t < 1e-2) {
    c.a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    c.b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    c.da = -1.0 / 3.0 + t2 / 30.0 - t2 * t2 / 840.0;
    c.db = -1.0 / 12.0 + t2 / 180.0 - t2 * t2 / 6720.0;
    if (t > 1e-4) {
      const double s = std::sin(0.5 * t) / t;
      c.a = std::sin(t) / t;
      c.b = 2.0 * s * s;
    }
    return c;
  }
  const double s = std::sin(0.5 * t) / t;
  c.a = std::sin(t) / t;
  c.b = 2.0 * s * s;
  c.da = (t * std::cos(t) - std::sin(t)) / (t2 * t);
  c.db = (t * std::sin(t) - 2.0 * (1.0 - std::cos(t))) / (t2 * t2);
  return c;
}

double matrix_residual(const Mat3& F, const Mat3& Jd, const Vec3& hg, double scale) {
  return (F * Jd - Jd * F.transpose() - hat(hg)).norm() / scale;
}

}  // namespace

ImplicitSolution solve_implicit_rotation(const Vec3& g, const Mat3& Jd, double h,
                                         const ImplicitSolveOptions& options) {
  const Mat3 J = Jd.trace() * Mat3::Identity() - Jd;
  const Vec3 hg = h * g;
  const double scale = std::max(1.0, Jd.norm());
  // ||S(x)||_F = sqrt(2) |x|
  const double vec_to_matrix = std::sqrt(2.0) / scale;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  ImplicitSolution out;
  Vec3 f = J.ldlt().solve(hg);
  if (options.start == NewtonStart::Arcsine) {
    // Exact when g lies along a principal axis: sin|f| J u = h g.
    const double s = f.norm();
    if (s > 0.0 && s < 1.0) f *= std::asin(s) / s;
  }
  int iter = 0;
  for (;;) {
    const double t = f.norm();
    const auto c = rodrigues_coefficients(t);
    const Vec3 Jf = J * f;
    const Vec3 fJf = f.cross(Jf);
    const Vec3 phi = c.a * Jf + c.b * fJf - hg;
    if (phi.norm() * vec_to_matrix <= options.tolerance) break;
    if (iter == options.max_iterations) {
      throw ConvergenceError("implicit rotation solve did not converge in " +
                             std::to_string(options.max_iterations) +
                             " iterations; residual " +
                             std::to_string(phi.norm() * vec_to_matrix));
    }
    const Mat3 jac = c.da * Jf * f.transpose() + c.a * J + c.db * fJf * f.transpose() +
                     c.b * (hat(f) * J - hat(Jf));
    const Vec3 step = jac.partialPivLu().solve(phi);
    f -= step;
    ++iter;
    if (step.norm() <= 4.0 * eps * std::max(f.norm(), eps)) break;
  }
  out.F = rotation_exp(f);
  out.report.f = f;
  out.report.iterations = iter;
  out.report.residual = matrix_residual(out.F, Jd, hg, scale);
  return out;
}

LgviStepResult lgvi_step(const RelativeState& s, const GravityGradients& g,
                         const SystemModel& model, double h, const ImplicitSolveOptions& options) {
  LgviStepResult out;
  const Mat3 JR = s.R * model.J1 * s.R.transpose();
  const Mat3 JdR = s.R * model.Jd1 * s.R.transpose();
  const Vec3 pi1 = JR * s.Omega - 0.5 * h * g.M;
  const Vec3 pi2 = model.J2 * s.Omega2 + 0.5 * h * s.X.cross(g.dUdX) + 0.5 * h * g.M;

  const ImplicitSolution sol1 = solve_implicit_rotation(pi1, JdR, h, options);
  const ImplicitSolution sol2 = solve_implicit_rotation(pi2, model.Jd2, h, options);
  out.F = sol1.F;
  out.F2 = sol2.F;
  out.solve_F = sol1.report;
  out.solve_F2 = sol2.report;
  const Mat3 F2t = out.F2.transpose();

  RelativeState& n = out.next;
  n.X = F2t * (s.X + h * s.V - (h * h / (2.0 * model.m)) * g.dUdX);
  n.R = F2t * out.F * s.R;
  model.check_separation(n.X);
  out.grads_next = model.gradients(n.X, n.R);
  const GravityGradients& gn = out.grads_next;

  n.V = F2t * (s.V - (h / (2.0 * model.m)) * g.dUdX) - (h / (2.0 * model.m)) * gn.dUdX;
  const Vec3 gamma = F2t * pi1 - 0.5 * h * gn.M;
  n.Omega = body1_velocity(n.R, gamma, model);
  const Vec3 J2Omega2 = F2t * pi2 + 0.5 * h * n.X.cross(gn.dUdX) + 0.5 * h * gn.M;
  n.Omega2 = model.J2_inverse * J2Omega2;
  return out;
}

InertialState reconstruct_inertial_step(const InertialState& in, const RelativeState& s,
                                        const LgviStepResult& step, const GravityGradients& grads,
                                        const SystemModel& model, double h,
                                        ReconstructionFrame frame) {
  InertialState out;
  out.R2 = in.R2 * step.F2;
  const bool body2 = frame == ReconstructionFrame::Body2;
  const Vec3 f0 = (body2 ? in.R2 : s.R) * grads.dUdX;
  const Vec3 f1 = (body2 ? out.R2 : step.next.R) * step.grads_next.dUdX;
  const double k = h / (2.0 * model.m2);
  out.x2 = in.x2 + h * in.v2 + h * k * f0;
  out.v2 = in.v2 + k * (f0 + f1);
  const RelativeState& n = step.next;
  out.x1 = out.x2 + out.R2 * n.X;
  out.v1 = out.v2 + out.R2 * n.V;
  out.R1 = out.R2 * n.R;
  return out;
}

}  // namespace f2bp
