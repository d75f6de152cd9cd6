#pragma once

#include "f2bp/common.hpp"
#include "f2bp/dynamics.hpp"

namespace f2bp {

enum class NewtonStart {
  Linear,   ///< f = h J^-1 g
  Arcsine,  ///< h J^-1 g rescaled to |f| = asin(|h J^-1 g|), exact for principal-axis spin
};

struct ImplicitSolveOptions {
  double tolerance = 1e-15;  ///< on the residual scaled by max(1, ||J_d||_F)
  int max_iterations = 20;
  NewtonStart start = NewtonStart::Arcsine;
};

struct ImplicitSolveReport {
  Vec3 f = Vec3::Zero();  ///< rotation vector of F
  int iterations = 0;
  double residual = 0.0;  ///< ||F J_d - J_d F^T - h S(g)||_F / max(1, ||J_d||_F)
};

struct ImplicitSolution {
  Mat3 F = Mat3::Identity();
  ImplicitSolveReport report;
};

/// Solves h S(g) = F J_d - J_d F^T for F in SO(3).
///
/// With F = exp(S(f)) and J = tr(J_d) I - J_d the equation reads
///   h g = (sin t / t) J f + ((1 - cos t) / t^2) f x J f,   t = |f|,
/// which is solved by Newton iteration from the chosen start. Iteration stops when
/// the residual meets the tolerance or the update stalls at round-off.
/// Throws ConvergenceError after max_iterations.
ImplicitSolution solve_implicit_rotation(const Vec3& g, const Mat3& Jd, double h,
                                         const ImplicitSolveOptions& options = {});

struct LgviStepResult {
  RelativeState next;
  Mat3 F = Mat3::Identity();
  Mat3 F2 = Mat3::Identity();
  GravityGradients grads_next;
  ImplicitSolveReport solve_F;
  ImplicitSolveReport solve_F2;
};

/// One step of the discrete relative equations. `grads` must be evaluated at
/// (s.X, s.R); exactly one new gradient evaluation is made, at the new state.
LgviStepResult lgvi_step(const RelativeState& s, const GravityGradients& grads,
                         const SystemModel& model, double h,
                         const ImplicitSolveOptions& options = {});

/// Rotation used to carry the body-2-frame force into the inertial frame
/// when reconstructing body 2's centroid motion.
enum class ReconstructionFrame {
  Body2,     ///< R2, the body-2 attitude
  Relative,  ///< R, the relative attitude (conserves linear momentum only when R2 = R)
};

/// Advances the inertial placements over one LGVI step and rebuilds body 1
/// from body 2 and the relative state.
InertialState reconstruct_inertial_step(const InertialState& in, const RelativeState& s,
                                        const LgviStepResult& step, const GravityGradients& grads,
                                        const SystemModel& model, double h,
                                        ReconstructionFrame frame = ReconstructionFrame::Body2);

}  // namespace f2bp
