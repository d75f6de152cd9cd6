#pragma once

#include "f2bp/body_model.hpp"
#include "f2bp/common.hpp"
#include "f2bp/elements.hpp"
#include "f2bp/lgvi.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace f2bp {

enum class IntegratorKind { Lgvi, Rkf78 };

/// How a Euler angle triple is applied. The triple always builds
/// Rz(phi1) Rx(phi2) Rz(phi3); this selects which way that matrix maps.
enum class EulerConvention {
  ReferenceToBody,  ///< the matrix maps reference coordinates to body coordinates
  BodyToReference,  ///< the matrix maps body coordinates to reference coordinates
};

struct BodyInput {
  std::filesystem::path vertices;
  std::filesystem::path faces;
  double density = 2500.0;                    ///< used when the face file has no density column
  Vec3 attitude_deg = Vec3::Zero();           ///< 3-1-3 Euler angles
  Vec3 spin = Vec3::Zero();                   ///< rad/s, in the body's own frame
};

struct RunConfig {
  BodyInput body1;
  BodyInput body2;
  EulerConvention euler = EulerConvention::ReferenceToBody;

  /// Initial relative orbit: elements (a [m], e, i, node, argp, nu [deg]) or a
  /// state vector, both in the reference frame.
  std::optional<std::array<double, 6>> elements;
  std::optional<Vec3> position;
  std::optional<Vec3> velocity;

  double G = 6.674e-11;
  ScaleFactors scale;

  IntegratorKind integrator = IntegratorKind::Lgvi;
  std::optional<double> h;    ///< LGVI step (s)
  std::optional<double> tol;  ///< RKF tolerance
  double t0 = 0.0;
  double tf = 0.0;
  int order = 4;

  std::filesystem::path out_states;
  std::filesystem::path out_diag;
  std::filesystem::path out_summary;
  int output_every = 1;  ///< write every n-th step

  bool deterministic = true;
  int threads = 1;

  bool rkf_diagnostic_eval = false;  ///< spend a 14th evaluation per step on diagnostics
  std::optional<double> rkf_h_initial;
  double rkf_h_min = 1e-9;
  double rkf_h_max = 0.0;  ///< 0 means unbounded

  ReconstructionFrame reconstruction = ReconstructionFrame::Body2;
  double contact_factor = 1.05;
  ImplicitSolveOptions newton;

  /// States CSV to resume from; its last row becomes the initial state.
  std::filesystem::path resume;

  /// Checks the combination rules and throws ConfigError on conflicts.
  void validate() const;
};

/// key = value lines; '#' starts a comment. Vectors are whitespace-separated.
/// Relative file paths resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& file);

IntegratorKind parse_integrator(const std::string& name);
std::string to_string(IntegratorKind kind);

}  // namespace f2bp
