#pragma once

#include "f2bp/common.hpp"
#include "f2bp/mutual_potential.hpp"

namespace f2bp {

/// Reduced state. X, V, Omega and Omega2 are in the body-2 frame; R maps
/// body-1 coordinates to body-2 coordinates.
struct RelativeState {
  Vec3 X = Vec3::Zero();
  Vec3 V = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 Omega = Vec3::Zero();   ///< body-1 angular velocity
  Vec3 Omega2 = Vec3::Zero();  ///< body-2 angular velocity
};

/// Body placements in the inertial frame; R1, R2 map body to inertial.
struct InertialState {
  Vec3 x1 = Vec3::Zero();
  Vec3 x2 = Vec3::Zero();
  Vec3 v1 = Vec3::Zero();
  Vec3 v2 = Vec3::Zero();
  Mat3 R1 = Mat3::Identity();
  Mat3 R2 = Mat3::Identity();
};

/// The two bodies, their gravity evaluator and the derived inertia data.
struct SystemModel {
  MutualGravity gravity;
  double m1 = 0.0;
  double m2 = 0.0;
  double m = 0.0;  ///< reduced mass m1 m2 / (m1 + m2)
  Mat3 J1, J2, Jd1, Jd2;
  Mat3 J2_inverse;
  /// Separations below this abort the integrators; 0 disables the check.
  double contact_radius = 0.0;

  /// contact_factor scales the sum of circumscribing radii.
  explicit SystemModel(MutualGravity gravity, double contact_factor = 1.05);

  double G() const { return gravity.G(); }
  double total_mass() const { return m1 + m2; }
  /// G (m1 + m2), the Keplerian parameter of the relative orbit.
  double mu() const { return G() * (m1 + m2); }
  GravityGradients gradients(const Vec3& X, const Mat3& R) const { return gravity.evaluate(X, R); }
  /// Throws ContactError when |X| is below the contact radius.
  void check_separation(const Vec3& X) const;
};

/// Gamma = R J1 R^T Omega, body-1 angular momentum in the body-2 frame.
Vec3 body1_momentum(const RelativeState& s, const SystemModel& model);
/// Omega from Gamma by solving (R J1 R^T) Omega = Gamma. R need not be orthogonal.
Vec3 body1_velocity(const Mat3& R, const Vec3& gamma, const SystemModel& model);

struct StateDerivative {
  Vec3 X;
  Vec3 V;
  Mat3 R;
  Vec3 Gamma;
  Vec3 Omega2;
};

/// Continuous relative equations of motion.
StateDerivative eom_rhs(const RelativeState& s, const GravityGradients& g, const SystemModel& model);

struct DiagnosticsRecord {
  double t = 0.0;
  double U = 0.0;
  double KE = 0.0;
  double E = 0.0;
  Vec3 gamma_T = Vec3::Zero();
  Vec3 pi_T = Vec3::Zero();
  double errR = 0.0;
  double errR2 = 0.0;
};

/// Trace form 1/2 m |V|^2 + 1/2 tr(S(Omega) J_dR S(Omega)^T) + 1/2 tr(S(Omega2) J_d2 S(Omega2)^T).
double kinetic_energy(const RelativeState& s, const SystemModel& model);

DiagnosticsRecord conserved_quantities(double t, const InertialState& inertial,
                                       const RelativeState& relative, const SystemModel& model,
                                       const GravityGradients& g);

/// Zero total linear momentum, system mass center at the origin.
InertialState init_inertial(const RelativeState& relative, const Mat3& R2, const SystemModel& model);

/// max(|R2^T (x1 - x2) - X|, ||R2^T R1 - R||_F)
double relative_consistency_error(const InertialState& inertial, const RelativeState& relative);

}  // namespace f2bp
