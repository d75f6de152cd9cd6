#include "f2bp/simulation.hpp"

#include "f2bp/csv.hpp"
#include "f2bp/elements.hpp"
#include "f2bp/lgvi.hpp"
#include "f2bp/q_tensors.hpp"
#include "f2bp/rkf78.hpp"
#include "f2bp/rotation.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

namespace f2bp {

void NewtonStats::record(int iterations, double residual) {
  if (histogram.size() <= static_cast<std::size_t>(iterations)) histogram.resize(iterations + 1, 0);
  ++histogram[iterations];
  max_residual = std::max(max_residual, residual);
}

std::uint64_t NewtonStats::solves() const {
  std::uint64_t n = 0;
  for (auto c : histogram) n += c;
  return n;
}

int NewtonStats::max_iterations() const {
  for (int k = static_cast<int>(histogram.size()) - 1; k >= 0; --k) {
    if (histogram[k]) return k;
  }
  return 0;
}

double NewtonStats::median_iterations() const {
  const std::uint64_t n = solves();
  if (n == 0) return 0.0;
  // Average of the two middle order statistics.
  auto kth = [&](std::uint64_t k) {
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < histogram.size(); ++i) {
      seen += histogram[i];
      if (seen > k) return static_cast<double>(i);
    }
    return static_cast<double>(histogram.size() - 1);
  };
  return 0.5 * (kth((n - 1) / 2) + kth(n / 2));
}

std::string RunSummary::to_json() const {
  nlohmann::ordered_json j;
  j["integrator"] = integrator;
  j["t0"] = t0;
  j["t_end"] = t_end;
  j["steps"] = steps;
  j["rejected_steps"] = rejected_steps;
  j["evaluations"] = evaluations;
  j["wall_time"] = wall_time;
  j["mean_dE"] = mean_dE;
  j["mean_dpi"] = mean_dpi;
  j["mean_errR"] = mean_errR;
  j["max_errR"] = max_errR;
  j["max_errR2"] = max_errR2;
  j["mean_h"] = mean_h;
  j["last_h"] = last_h;
  j["convergence_warnings"] = convergence_warnings;
  if (newton.solves() > 0) {
    j["newton"] = {{"solves", newton.solves()},
                   {"max_iterations", newton.max_iterations()},
                   {"median_iterations", newton.median_iterations()},
                   {"max_residual", newton.max_residual},
                   {"histogram", newton.histogram}};
  }
  return j.dump(2);
}

Mat3 attitude_from_euler(const Vec3& angles_deg, EulerConvention convention) {
  const Mat3 e = euler313_to_rotation(angles_deg[0], angles_deg[1], angles_deg[2]);
  return convention == EulerConvention::BodyToReference ? e : Mat3(e.transpose());
}

std::pair<RelativeState, Mat3> initial_relative_state(const RunConfig& c, double m1, double m2) {
  const Mat3 R1 = attitude_from_euler(c.body1.attitude_deg, c.euler);
  const Mat3 R2 = attitude_from_euler(c.body2.attitude_deg, c.euler);
  Vec3 x_ref, v_ref;
  if (c.elements) {
    constexpr double d2r = std::numbers::pi / 180.0;
    const auto& e = *c.elements;
    OrbitalElements el{e[0], e[1], e[2] * d2r, e[3] * d2r, e[4] * d2r, e[5] * d2r};
    std::tie(x_ref, v_ref) = elements_to_state(el, c.G * (m1 + m2));
  } else if (c.position && c.velocity) {
    x_ref = *c.position;
    v_ref = *c.velocity;
  } else {
    throw ConfigError("no initial orbit given");
  }
  RelativeState rel;
  rel.R = R2.transpose() * R1;
  rel.X = R2.transpose() * x_ref;
  rel.V = R2.transpose() * v_ref;
  rel.Omega = rel.R * c.body1.spin;
  rel.Omega2 = c.body2.spin;
  return {rel, R2};
}

namespace {

struct Scaling {
  double L, M, T;
  double velocity() const { return L / T; }
  double energy() const { return M * L * L / (T * T); }
  double linear_momentum() const { return M * L / T; }
  double angular_momentum() const { return M * L * L / T; }
};

RelativeState scale_rel(const RelativeState& r, const Scaling& s, bool to_si) {
  const double l = to_si ? s.L : 1.0 / s.L;
  const double v = to_si ? s.velocity() : 1.0 / s.velocity();
  const double w = to_si ? 1.0 / s.T : s.T;
  return {r.X * l, r.V * v, r.R, r.Omega * w, r.Omega2 * w};
}

InertialState scale_in(const InertialState& in, const Scaling& s, bool to_si) {
  const double l = to_si ? s.L : 1.0 / s.L;
  const double v = to_si ? s.velocity() : 1.0 / s.velocity();
  return {in.x1 * l, in.x2 * l, in.v1 * v, in.v2 * v, in.R1, in.R2};
}

template <class E>
[[noreturn]] void rethrow_at(const E& e, std::uint64_t step, double t) {
  throw E("step " + std::to_string(step) + " (t = " + std::to_string(t) + " s): " + e.what());
}

// Runs `f`, tagging integrator failures with the step they happened at.
template <class F>
void at_step(std::uint64_t step, double t, F&& f) {
  try {
    f();
  } catch (const ContactError& e) {
    rethrow_at(e, step, t);
  } catch (const ConvergenceError& e) {
    rethrow_at(e, step, t);
  } catch (const StepSizeUnderflowError& e) {
    rethrow_at(e, step, t);
  } catch (const SingularConfigurationError& e) {
    rethrow_at(e, step, t);
  }
}

}  // namespace

struct Simulation::Output {
  std::ofstream states;
  std::ofstream diag;
  int every = 1;
  std::uint64_t count = 0;

  // Running sums for the summary, all in SI units.
  bool have_ref = false;
  double E0 = 0.0;
  Vec3 pi0 = Vec3::Zero();
  double sum_dE = 0.0, sum_dpi = 0.0, sum_errR = 0.0;
  double max_errR = 0.0, max_errR2 = 0.0;
  std::uint64_t samples = 0;

  void open(const RunConfig& c) {
    every = c.output_every;
    if (!c.out_states.empty()) {
      states.open(c.out_states);
      if (!states) throw ConfigError("cannot write " + c.out_states.string());
      write_header(states, state_columns());
    }
    if (!c.out_diag.empty()) {
      diag.open(c.out_diag);
      if (!diag) throw ConfigError("cannot write " + c.out_diag.string());
      write_header(diag, diagnostics_columns());
    }
  }

  // index 0 is the initial point; `last` forces a row.
  void emit(const StepSample& s, std::uint64_t index, bool last,
            const std::function<void(const StepSample&)>& observer) {
    if (!have_ref) {
      have_ref = true;
      E0 = s.diag.E;
      pi0 = s.diag.pi_T;
    } else {
      sum_dE += std::abs(s.diag.E - E0);
      sum_dpi += (s.diag.pi_T - pi0).norm();
      sum_errR += s.diag.errR;
      ++samples;
    }
    max_errR = std::max(max_errR, s.diag.errR);
    max_errR2 = std::max(max_errR2, s.diag.errR2);
    if (observer) observer(s);
    if (index % every == 0 || last) {
      if (states.is_open()) write_state_row(states, s.t, s.rel, s.in);
      if (diag.is_open()) write_diagnostics_row(diag, s.diag);
    }
  }

  void fill(RunSummary& r) const {
    if (samples > 0) {
      r.mean_dE = sum_dE / samples;
      r.mean_dpi = sum_dpi / samples;
      r.mean_errR = sum_errR / samples;
    }
    r.max_errR = max_errR;
    r.max_errR2 = max_errR2;
  }
};

Simulation::Simulation(RunConfig config) : config_(std::move(config)) {
  config_.validate();
  const PolyhedralBody b1 = build_body(
      load_body_model(config_.body1.vertices, config_.body1.faces, config_.body1.density));
  const PolyhedralBody b2 = build_body(
      load_body_model(config_.body2.vertices, config_.body2.faces, config_.body2.density));
  const ScaleFactors& s = config_.scale;
  const Scaling sc{s.length, s.mass, s.time};

  EvalOptions opts;
  opts.reduction = config_.deterministic ? Reduction::Deterministic : Reduction::Unordered;
  opts.threads = config_.threads;
  const QTensorSet q(config_.order);
  MutualGravity gravity(nondimensionalize(b1, s), nondimensionalize(b2, s),
                        nondimensionalize_gravity(config_.G, s), q, config_.order, opts);
  model_ = std::make_unique<SystemModel>(std::move(gravity), config_.contact_factor);

  if (!config_.resume.empty()) {
    const StateRow row = read_last_state(config_.resume);
    t0_ = row.t / sc.T;
    rel0_ = scale_rel(row.rel, sc, false);
    in0_ = scale_in(row.in, sc, false);
  } else {
    auto [rel, R2] = initial_relative_state(config_, b1.mass, b2.mass);
    t0_ = config_.t0 / sc.T;
    rel0_ = scale_rel(rel, sc, false);
    in0_ = init_inertial(rel0_, R2, *model_);
  }
  if (!(config_.tf / sc.T > t0_)) throw ConfigError("tf must exceed the starting time");
}

Simulation::~Simulation() = default;

StepSample Simulation::to_si(double t, const RelativeState& rel, const InertialState& in,
                             const DiagnosticsRecord* d) const {
  const ScaleFactors& s = config_.scale;
  const Scaling sc{s.length, s.mass, s.time};
  StepSample out;
  out.t = t * sc.T;
  out.rel = scale_rel(rel, sc, true);
  out.in = scale_in(in, sc, true);
  if (d) {
    out.diag = *d;
    out.diag.t = out.t;
    out.diag.U *= sc.energy();
    out.diag.KE *= sc.energy();
    out.diag.E *= sc.energy();
    out.diag.gamma_T *= sc.linear_momentum();
    out.diag.pi_T *= sc.angular_momentum();
  }
  return out;
}

StepSample Simulation::initial_state() const { return to_si(t0_, rel0_, in0_, nullptr); }

RunSummary Simulation::run() {
  Output out;
  out.open(config_);
  model_->gravity.reset_counters();
  RunSummary r = config_.integrator == IntegratorKind::Lgvi ? run_lgvi(out) : run_rkf(out);
  r.integrator = to_string(config_.integrator);
  r.evaluations = model_->gravity.evaluation_count();
  r.convergence_warnings = model_->gravity.warning_count();
  out.fill(r);
  if (!config_.out_summary.empty()) {
    std::ofstream js(config_.out_summary);
    if (!js) throw ConfigError("cannot write " + config_.out_summary.string());
    js << r.to_json() << '\n';
  }
  return r;
}

RunSummary Simulation::run_lgvi(Output& out) {
  const SystemModel& model = *model_;
  const double T = config_.scale.time;
  const double h = *config_.h / T;
  const double tf = config_.tf / T;
  const double span = tf - t0_;
  double whole = std::floor(span / h);
  if (span - whole * h > 1e-9 * std::abs(h)) whole += 1.0;
  const auto n_steps = static_cast<std::uint64_t>(whole);

  RunSummary r;
  r.t0 = t0_ * T;
  const auto start = std::chrono::steady_clock::now();

  RelativeState rel = rel0_;
  InertialState in = in0_;
  model.check_separation(rel.X);
  GravityGradients g = model.gradients(rel.X, rel.R);
  DiagnosticsRecord d = conserved_quantities(t0_, in, rel, model, g);
  out.emit(to_si(t0_, rel, in, &d), 0, n_steps == 0, observer_);

  double t = t0_;
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    const double t_next = n == n_steps ? tf : t0_ + static_cast<double>(n) * h;
    const double step = t_next - t;
    at_step(n, t * T, [&] {
      const LgviStepResult st = lgvi_step(rel, g, model, step, config_.newton);
      r.newton.record(st.solve_F.iterations, st.solve_F.residual);
      r.newton.record(st.solve_F2.iterations, st.solve_F2.residual);
      in = reconstruct_inertial_step(in, rel, st, g, model, step, config_.reconstruction);
      rel = st.next;
      g = st.grads_next;
    });
    t = t_next;
    d = conserved_quantities(t, in, rel, model, g);
    out.emit(to_si(t, rel, in, &d), n, n == n_steps, observer_);
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.steps = n_steps;
  r.t_end = t * T;
  r.mean_h = n_steps ? (t - t0_) * T / static_cast<double>(n_steps) : 0.0;
  r.last_h = *config_.h;
  return r;
}

RunSummary Simulation::run_rkf(Output& out) {
  const SystemModel& model = *model_;
  const double T = config_.scale.time;
  const double tf = config_.tf / T;

  Rkf78Control ctrl;
  ctrl.tolerance = *config_.tol;
  ctrl.h_min = config_.rkf_h_min / T;
  ctrl.h_max = config_.rkf_h_max > 0.0 ? config_.rkf_h_max / T : std::numeric_limits<double>::infinity();
  ctrl.validate();
  double h = config_.rkf_h_initial ? *config_.rkf_h_initial / T : (tf - t0_) / 1e5;
  h = std::clamp(h, ctrl.h_min, ctrl.h_max);

  RunSummary r;
  r.t0 = t0_ * T;
  const auto start = std::chrono::steady_clock::now();

  OdeState y = pack_state(rel0_, in0_, model);
  double t = t0_;
  model.check_separation(rel0_.X);

  // Diagnostics at an accepted point need the gradients there. Without the
  // extra evaluation they come from stage 0 of the next attempt, which is
  // evaluated at exactly that point.
  const bool extra_eval = config_.rkf_diagnostic_eval;
  bool pending = false;
  std::uint64_t pending_index = 0;
  OdeState pending_y;
  double pending_t = 0.0;
  int stage = 0;
  GravityGradients stage0;

  auto emit_at = [&](double tt, const OdeState& yy, const GravityGradients& g, std::uint64_t index,
                     bool last) {
    RelativeState rel;
    InertialState in;
    unpack_state(yy, model, rel, in);
    const DiagnosticsRecord d = conserved_quantities(tt, in, rel, model, g);
    out.emit(to_si(tt, rel, in, &d), index, last, observer_);
  };
  auto evaluate_at = [&](const OdeState& yy) {
    RelativeState rel;
    InertialState in;
    unpack_state(yy, model, rel, in);
    return model.gradients(rel.X, rel.R);
  };
  auto defer = [&](std::uint64_t index) {
    pending = true;
    pending_index = index;
    pending_y = y;
    pending_t = t;
  };

  const OdeRhs rhs = [&](const OdeState& yy, OdeState& dy, double) {
    if (stage++ == 0) {
      packed_rhs(yy, dy, model, &stage0);
      return;
    }
    packed_rhs(yy, dy, model);
  };

  if (extra_eval) {
    emit_at(t, y, evaluate_at(y), 0, false);
  } else {
    defer(0);
  }

  Rkf78Stepper stepper;
  const double t_eps = 1e-12 * std::max(std::abs(tf), std::abs(tf - t0_));
  while (tf - t > t_eps) {
    const double h_try = std::min(h, tf - t);
    Rkf78Attempt a;
    stage = 0;
    at_step(r.steps + 1, t * T, [&] { a = stepper.step(rhs, y, t, h_try, ctrl); });
    // Stage 0 sat at the pending point.
    if (pending) {
      emit_at(pending_t, pending_y, stage0, pending_index, false);
      pending = false;
    }
    h = a.h_next;
    if (!a.accepted) {
      ++r.rejected_steps;
      continue;
    }
    ++r.steps;
    at_step(r.steps, t * T, [&] { model.check_separation(Vec3(y[0], y[1], y[2])); });
    if (extra_eval) {
      emit_at(t, y, evaluate_at(y), r.steps, tf - t <= t_eps);
    } else {
      defer(r.steps);
    }
  }
  if (pending) emit_at(pending_t, pending_y, evaluate_at(pending_y), pending_index, true);

  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.t_end = t * T;
  r.mean_h = r.steps ? (t - t0_) * T / static_cast<double>(r.steps) : 0.0;
  r.last_h = h * T;
  return r;
}

}  // namespace f2bp
