#pragma once

#include "f2bp/config.hpp"
#include "f2bp/dynamics.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace f2bp {

/// Iteration counts of every implicit rotation solve in a run.
struct NewtonStats {
  std::vector<std::uint64_t> histogram;  ///< histogram[k] = solves that took k iterations
  double max_residual = 0.0;

  void record(int iterations, double residual);
  std::uint64_t solves() const;
  int max_iterations() const;
  double median_iterations() const;
};

struct RunSummary {
  std::string integrator;
  double t0 = 0.0;
  double t_end = 0.0;
  std::uint64_t steps = 0;           ///< accepted steps
  std::uint64_t rejected_steps = 0;  ///< RKF only
  std::uint64_t evaluations = 0;     ///< gradient evaluations N_u
  double wall_time = 0.0;            ///< seconds
  double mean_dE = 0.0;              ///< mean |E - E0| over steps, J
  double mean_dpi = 0.0;             ///< mean |pi_T - pi_T0| over steps
  double mean_errR = 0.0;            ///< mean ||I - R^T R||_F over steps
  double max_errR = 0.0;
  double max_errR2 = 0.0;
  double mean_h = 0.0;               ///< s
  double last_h = 0.0;               ///< RKF: the controller's next proposal, s
  std::uint64_t convergence_warnings = 0;
  NewtonStats newton;                ///< LGVI only

  std::string to_json() const;
};

/// One propagated point, in SI units.
struct StepSample {
  double t = 0.0;
  RelativeState rel;
  InertialState in;
  DiagnosticsRecord diag;
};

/// Loads the bodies, builds the initial state and propagates it.
///
/// Internally every quantity is divided by the configured scale factors;
/// samples, CSV rows and the summary are converted back to SI units.
class Simulation {
 public:
  explicit Simulation(RunConfig config);
  ~Simulation();

  const RunConfig& config() const { return config_; }
  const SystemModel& model() const { return *model_; }
  /// Initial state in SI units (diagnostics are not filled in).
  StepSample initial_state() const;

  /// Called at every step, in step order, before any CSV row is written.
  void set_observer(std::function<void(const StepSample&)> observer) { observer_ = std::move(observer); }

  RunSummary run();

 private:
  struct Output;

  RunSummary run_lgvi(Output& out);
  RunSummary run_rkf(Output& out);
  StepSample to_si(double t, const RelativeState& rel, const InertialState& in,
                   const DiagnosticsRecord* d) const;

  RunConfig config_;
  std::unique_ptr<SystemModel> model_;
  double t0_ = 0.0;  ///< scaled
  RelativeState rel0_;
  InertialState in0_;
  std::function<void(const StepSample&)> observer_;
};

/// Builds the relative state and body-2 attitude from the configured angles,
/// spins and orbit. Returns SI quantities.
std::pair<RelativeState, Mat3> initial_relative_state(const RunConfig& config, double m1, double m2);

/// Body-to-reference rotation for a Euler triple under the given convention.
Mat3 attitude_from_euler(const Vec3& angles_deg, EulerConvention convention);

}  // namespace f2bp
