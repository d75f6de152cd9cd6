#pragma once

#include "f2bp/body_model.hpp"
#include "f2bp/common.hpp"
#include "f2bp/q_tensors.hpp"

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

namespace f2bp {

/// Configuration-dependent quantities for one simplex pair.
///
/// Columns 0-2 of v are the body-1 simplex corners rotated into the body-2
/// frame, columns 3-5 are the negated body-2 corners, so that the separation
/// of two material points is X + v s for the stacked barycentric weights s.
struct PairGeometry {
  Eigen::Matrix<double, 3, 6> v;
  Eigen::Matrix<double, 6, 1> w;     ///< w^i = v^i . X
  Eigen::Matrix<double, 6, 6> rmat;  ///< Gram matrix v^T v
  double r = 0.0;                    ///< |X|
};

PairGeometry assemble_pair_geometry(const Vec3& X, const Mat3& R, const Mat3& a_corners,
                                    const Mat3& b_corners);

/// Per-pair series terms U_0..U_order, contracted directly against the Q tensors.
///
/// Slow; meant for inspection and cross-checks of the pair kernel.
std::vector<double> series_terms(const PairGeometry& geometry, const QTensorSet& q, int order);

/// Mutual potential and its gradients at one relative configuration.
/// X and dUdX are in the body-2 frame; R maps body-1 to body-2 coordinates.
struct GravityGradients {
  double U = 0.0;
  Vec3 dUdX = Vec3::Zero();
  Mat3 dUdR = Mat3::Zero();
  Vec3 M = Vec3::Zero();
  /// Set when |X| is inside the sum of circumscribing radii, where the
  /// series is no longer guaranteed to converge.
  bool outside_convergence_region = false;
};

/// M with hat(M) = dUdR R^T - R dUdR^T, i.e. sum_c R_c x (dUdR)_c.
Vec3 moment(const Mat3& dUdR, const Mat3& R);

enum class Reduction {
  Deterministic,  ///< fixed summation order, bit-reproducible for any thread count
  Unordered,      ///< partial sums combined as they finish
};

struct EvalOptions {
  Reduction reduction = Reduction::Deterministic;
  /// Worker threads for the pair sum; 1 runs inline, 0 uses all hardware threads.
  int threads = 1;
  /// Optional visiting order of the body-2 simplices (each one is a row of
  /// pairs against every body-1 simplex). Empty means natural order.
  std::vector<int> row_order;
};

/// Unweighted series terms of one simplex pair, split by order n.
struct PairTerms {
  std::vector<double> U;     ///< U_n
  std::vector<Vec3> dUdX;    ///< dU_n/dX
  std::vector<Mat3> dUdR;    ///< dU_n/dR
};

/// Truncated mutual potential of two polyhedral bodies with its gradients.
///
/// The double sum over simplex pairs expands 1/|d| about the centroid
/// separation to a fixed order. The Taylor coefficients depend only on X and
/// are built once per call; each pair then contracts them with its moment
/// tensor, the Q tensors mapped through the pair's corner matrix v.
class MutualGravity {
 public:
  MutualGravity(PolyhedralBody body1, PolyhedralBody body2, double G, const QTensorSet& q,
                int order, EvalOptions options = {});
  MutualGravity(const MutualGravity& other);
  MutualGravity& operator=(const MutualGravity&) = delete;
  ~MutualGravity();

  /// One full pass over all simplex pairs. Counts as one gradient evaluation.
  GravityGradients evaluate(const Vec3& X, const Mat3& R) const;

  PairTerms pair_terms(std::size_t a, std::size_t b, const Vec3& X, const Mat3& R) const;

  /// Writes each pair's weighted contribution (U, dUdX, dUdR) as CSV rows.
  void write_pair_csv(std::ostream& out, const Vec3& X, const Mat3& R) const;

  const PolyhedralBody& body1() const { return body1_; }
  const PolyhedralBody& body2() const { return body2_; }
  double G() const { return G_; }
  int order() const { return order_; }
  const EvalOptions& options() const { return options_; }
  void set_options(EvalOptions options);

  /// Sum of circumscribing radii; the series converges outside it.
  double convergence_radius() const { return body1_.circumscribing_radius + body2_.circumscribing_radius; }

  std::uint64_t evaluation_count() const { return evaluations_.load(); }
  std::uint64_t warning_count() const { return warnings_.load(); }
  void reset_counters() const;

 private:
  struct Tables;

  PolyhedralBody body1_;
  PolyhedralBody body2_;
  double G_;
  int order_;
  EvalOptions options_;
  std::shared_ptr<const Tables> tables_;
  mutable std::atomic<std::uint64_t> evaluations_{0};
  mutable std::atomic<std::uint64_t> warnings_{0};
};

double potential(const Vec3& X, const Mat3& R, const PolyhedralBody& body1,
                 const PolyhedralBody& body2, double G, const QTensorSet& q, int order);
Vec3 force_gradient(const Vec3& X, const Mat3& R, const PolyhedralBody& body1,
                    const PolyhedralBody& body2, double G, const QTensorSet& q, int order);
Mat3 attitude_gradient(const Vec3& X, const Mat3& R, const PolyhedralBody& body1,
                       const PolyhedralBody& body2, double G, const QTensorSet& q, int order);

}  // namespace f2bp
