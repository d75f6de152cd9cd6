#pragma once

#include "f2bp/dynamics.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace f2bp {

using OdeState = std::vector<double>;
/// dydt = f(y, t)
using OdeRhs = std::function<void(const OdeState& y, OdeState& dydt, double t)>;

struct Rkf78Control {
  double tolerance = 1e-12;
  double h_min = 1e-9;
  double h_max = std::numeric_limits<double>::infinity();
  double safety = 0.9;
  double max_growth = 5.0;
  double max_shrink = 0.1;

  void validate() const;
};

struct Rkf78Attempt {
  bool accepted = false;
  double h_used = 0.0;
  double h_next = 0.0;
  double error = 0.0;  ///< scaled error norm of the attempt
};

/// max_i |err_i| / (1 + |y_i|); infinite when any term is not finite.
double rkf78_error_norm(const OdeState& y, const OdeState& err);

/// Adaptive Fehlberg 7(8) stepping: 13 right-hand-side calls per attempt,
/// eighth-order propagation, embedded seventh-order error estimate.
class Rkf78Stepper {
 public:
  /// One attempt of size h. On acceptance y and t advance; on rejection they
  /// are left untouched. Throws StepSizeUnderflowError when a rejected step
  /// is already at h_min.
  Rkf78Attempt step(const OdeRhs& rhs, OdeState& y, double& t, double h,
                    const Rkf78Control& control);

 private:
  OdeState out_;
  OdeState err_;
};

/// Packed continuous state: X(3) V(3) R(9, row-major) Gamma(3) Omega2(3)
/// x2(3) v2(3) R2(9), with Gamma = R J1 R^T Omega.
inline constexpr int kPackedSize = 36;

OdeState pack_state(const RelativeState& rel, const InertialState& in, const SystemModel& model);

/// Inverse of pack_state. Omega comes from solving (R J1 R^T) Omega = Gamma
/// and body 1's placement from body 2 and the relative state.
void unpack_state(const OdeState& y, const SystemModel& model, RelativeState& rel,
                  InertialState& in);

/// Time derivative of the packed state; one gradient evaluation. The
/// gradients used are copied to `grads` when it is non-null.
void packed_rhs(const OdeState& y, OdeState& dydt, const SystemModel& model,
                GravityGradients* grads = nullptr);

}  // namespace f2bp
