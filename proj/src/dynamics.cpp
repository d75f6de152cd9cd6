#include "f2bp/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace f2bp {

SystemModel::SystemModel(MutualGravity gravity_in, double contact_factor)
    : gravity(std::move(gravity_in)) {
  const PolyhedralBody& b1 = gravity.body1();
  const PolyhedralBody& b2 = gravity.body2();
  m1 = b1.mass;
  m2 = b2.mass;
  m = m1 * m2 / (m1 + m2);
  J1 = b1.inertia;
  J2 = b2.inertia;
  Jd1 = b1.inertia_nonstandard;
  Jd2 = b2.inertia_nonstandard;
  J2_inverse = J2.inverse();
  if (contact_factor < 0.0) throw ConfigError("contact factor must be >= 0");
  contact_radius = contact_factor * gravity.convergence_radius();
}

void SystemModel::check_separation(const Vec3& X) const {
  const double r = X.norm();
  if (r < contact_radius) {
    throw ContactError("separation " + std::to_string(r) + " below contact bound " +
                       std::to_string(contact_radius));
  }
}

Vec3 body1_momentum(const RelativeState& s, const SystemModel& model) {
  return s.R * (model.J1 * (s.R.transpose() * s.Omega));
}

Vec3 body1_velocity(const Mat3& R, const Vec3& gamma, const SystemModel& model) {
  const Mat3 JR = R * model.J1 * R.transpose();
  return JR.ldlt().solve(gamma);
}

StateDerivative eom_rhs(const RelativeState& s, const GravityGradients& g, const SystemModel& model) {
  StateDerivative d;
  d.X = s.V - s.Omega2.cross(s.X);
  d.R = hat(s.Omega) * s.R - hat(s.Omega2) * s.R;
  d.V = -g.dUdX / model.m - s.Omega2.cross(s.V);
  const Vec3 gamma = s.R * model.J1 * s.R.transpose() * s.Omega;
  d.Gamma = -g.M - s.Omega2.cross(gamma);
  d.Omega2 = model.J2_inverse *
             (s.X.cross(g.dUdX) + g.M - s.Omega2.cross(model.J2 * s.Omega2));
  return d;
}

double kinetic_energy(const RelativeState& s, const SystemModel& model) {
  const Mat3 JdR = s.R * model.Jd1 * s.R.transpose();
  const Mat3 S1 = hat(s.Omega);
  const Mat3 S2 = hat(s.Omega2);
  return 0.5 * model.m * s.V.squaredNorm() + 0.5 * (S1 * JdR * S1.transpose()).trace() +
         0.5 * (S2 * model.Jd2 * S2.transpose()).trace();
}

DiagnosticsRecord conserved_quantities(double t, const InertialState& in, const RelativeState& rel,
                                       const SystemModel& model, const GravityGradients& g) {
  DiagnosticsRecord d;
  d.t = t;
  d.U = g.U;
  d.KE = kinetic_energy(rel, model);
  d.E = d.KE + d.U;
  d.gamma_T = model.m1 * in.v1 + model.m2 * in.v2;
  const Vec3 omega1 = rel.R.transpose() * rel.Omega;
  d.pi_T = in.x1.cross(model.m1 * in.v1) + in.R1 * (model.J1 * omega1) +
           in.x2.cross(model.m2 * in.v2) + in.R2 * (model.J2 * rel.Omega2);
  d.errR = orthogonality_error(rel.R);
  d.errR2 = orthogonality_error(in.R2);
  return d;
}

InertialState init_inertial(const RelativeState& rel, const Mat3& R2, const SystemModel& model) {
  const double f = model.m1 / model.total_mass();
  InertialState in;
  in.R2 = R2;
  in.R1 = R2 * rel.R;
  in.v2 = -f * (R2 * rel.V);
  in.v1 = in.v2 + R2 * rel.V;
  in.x2 = -f * (R2 * rel.X);
  in.x1 = in.x2 + R2 * rel.X;
  return in;
}

double relative_consistency_error(const InertialState& in, const RelativeState& rel) {
  const double pos = (in.R2.transpose() * (in.x1 - in.x2) - rel.X).norm();
  const double att = (in.R2.transpose() * in.R1 - rel.R).norm();
  return std::max(pos, att);
}

}  // namespace f2bp
