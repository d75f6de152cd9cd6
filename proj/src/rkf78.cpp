#include "f2bp/rkf78.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace f2bp {
namespace {

using Fehlberg78 = boost::numeric::odeint::runge_kutta_fehlberg78<OdeState>;

void put(OdeState& y, int at, const Vec3& v) {
  for (int i = 0; i < 3; ++i) y[at + i] = v[i];
}

void put(OdeState& y, int at, const Mat3& m) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) y[at + 3 * i + j] = m(i, j);
  }
}

Vec3 vec_at(const OdeState& y, int at) { return {y[at], y[at + 1], y[at + 2]}; }

Mat3 mat_at(const OdeState& y, int at) {
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = y[at + 3 * i + j];
  }
  return m;
}

enum Offset { kX = 0, kV = 3, kR = 6, kGamma = 15, kOmega2 = 18, kx2 = 21, kv2 = 24, kR2 = 27 };

}  // namespace

void Rkf78Control::validate() const {
  if (!(tolerance > 0.0)) throw ConfigError("RKF tolerance must be positive");
  if (!(h_min > 0.0) || !(h_max >= h_min)) throw ConfigError("RKF step bounds must satisfy 0 < h_min <= h_max");
  if (!(safety > 0.0 && safety <= 1.0)) throw ConfigError("RKF safety factor must lie in (0, 1]");
}

double rkf78_error_norm(const OdeState& y, const OdeState& err) {
  double e = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double s = std::abs(err[i]) / (1.0 + std::abs(y[i]));
    // A non-finite estimate must reject the step, which std::max would hide.
    if (!std::isfinite(s)) return std::numeric_limits<double>::infinity();
    e = std::max(e, s);
  }
  return e;
}

Rkf78Attempt Rkf78Stepper::step(const OdeRhs& rhs, OdeState& y, double& t, double h,
                                const Rkf78Control& control) {
  Fehlberg78 stepper;
  out_.resize(y.size());
  err_.resize(y.size());
  stepper.do_step(rhs, y, t, out_, h, err_);

  Rkf78Attempt a;
  a.h_used = h;
  a.error = rkf78_error_norm(y, err_);
  a.accepted = a.error <= control.tolerance;
  double factor = control.max_growth;
  if (a.error > 0.0) {
    factor = control.safety * std::pow(control.tolerance / a.error, 1.0 / 8.0);
    factor = std::clamp(factor, control.max_shrink, control.max_growth);
  }
  const double sign = h < 0.0 ? -1.0 : 1.0;
  a.h_next = sign * std::clamp(std::abs(h) * factor, control.h_min, control.h_max);
  if (a.accepted) {
    y.swap(out_);
    t += h;
  } else if (std::abs(h) <= control.h_min) {
    throw StepSizeUnderflowError("RKF step size fell below h_min at t = " + std::to_string(t));
  }
  return a;
}

OdeState pack_state(const RelativeState& rel, const InertialState& in, const SystemModel& model) {
  OdeState y(kPackedSize);
  put(y, kX, rel.X);
  put(y, kV, rel.V);
  put(y, kR, rel.R);
  put(y, kGamma, body1_momentum(rel, model));
  put(y, kOmega2, rel.Omega2);
  put(y, kx2, in.x2);
  put(y, kv2, in.v2);
  put(y, kR2, in.R2);
  return y;
}

void unpack_state(const OdeState& y, const SystemModel& model, RelativeState& rel,
                  InertialState& in) {
  if (y.size() != static_cast<std::size_t>(kPackedSize)) throw ConfigError("packed state must have 36 entries");
  rel.X = vec_at(y, kX);
  rel.V = vec_at(y, kV);
  rel.R = mat_at(y, kR);
  rel.Omega = body1_velocity(rel.R, vec_at(y, kGamma), model);
  rel.Omega2 = vec_at(y, kOmega2);
  in.x2 = vec_at(y, kx2);
  in.v2 = vec_at(y, kv2);
  in.R2 = mat_at(y, kR2);
  in.x1 = in.x2 + in.R2 * rel.X;
  in.v1 = in.v2 + in.R2 * rel.V;
  in.R1 = in.R2 * rel.R;
}

void packed_rhs(const OdeState& y, OdeState& dydt, const SystemModel& model,
                GravityGradients* grads) {
  RelativeState rel;
  InertialState in;
  unpack_state(y, model, rel, in);
  const GravityGradients g = model.gradients(rel.X, rel.R);
  const StateDerivative d = eom_rhs(rel, g, model);
  dydt.resize(kPackedSize);
  put(dydt, kX, d.X);
  put(dydt, kV, d.V);
  put(dydt, kR, d.R);
  put(dydt, kGamma, d.Gamma);
  put(dydt, kOmega2, d.Omega2);
  put(dydt, kx2, in.v2);
  put(dydt, kv2, Vec3(in.R2 * g.dUdX / model.m2));
  put(dydt, kR2, Mat3(in.R2 * hat(rel.Omega2)));
  if (grads) *grads = g;
}

}  // namespace f2bp
